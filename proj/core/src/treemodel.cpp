#include "sokolab/treemodel.hpp"

#include <algorithm>
#include <cmath>

#include "sokolab/analysis.hpp"

namespace sokolab {

namespace {

// ceil with a relative guard so exact integer results of pow/log2 stay exact
std::uint64_t ceil_guarded(double v) {
    return static_cast<std::uint64_t>(std::ceil(v - std::abs(v) * 1e-12 - 1e-12));
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r) || r > cap) return cap;
    return r;
}

} // namespace

std::uint64_t LeftTailModelParams::k() const {
    return ceil_guarded(c * std::log2(static_cast<double>(n)));
}

std::uint64_t LeftTailModelParams::plan_length() const {
    return ceil_guarded(std::pow(static_cast<double>(n), a));
}

std::uint64_t LeftTailModelParams::wrong_subtree_cost() const {
    if (n >= 63) return cost_cap;
    return std::min(std::uint64_t{1} << n, cost_cap);
}

std::uint64_t LeftTailModelParams::poly_threshold() const {
    return plan_length() * (1 + static_cast<std::uint64_t>(detour_max));
}

double RightTailModelParams::expected_cost() const { return (1.0 - p) / (1.0 - p * b); }

double RightTailModelParams::tail_alpha() const { return std::log(1.0 / p) / std::log(b); }

ModelRunCost sample_left_cost(const LeftTailModelParams& params, Rng& rng) {
    const std::uint64_t L = params.plan_length();
    const std::uint64_t K = params.k();
    const std::uint64_t E = params.wrong_subtree_cost();

    std::uint64_t cost = std::min(L, params.cost_cap);
    for (std::uint64_t i = 0; i < L; ++i)
        cost = sat_add(cost, rng.below(params.detour_max + 1), params.cost_cap);

    std::uint32_t mistakes = 0;
    for (std::uint64_t i = 0; i < K; ++i) {
        if (rng.uniform() >= params.p) {
            ++mistakes;
            cost = sat_add(cost, E, params.cost_cap);
        }
    }
    return {cost, cost < params.cost_cap, mistakes};
}

ModelRunCost sample_right_cost(const RightTailModelParams& params, Rng& rng) {
    // inversion: i >= m iff u <= p^m
    const double u = rng.uniform_pos();
    std::uint64_t i = 0;
    if (params.p > 0.0 && u < 1.0)
        i = static_cast<std::uint64_t>(std::floor(std::log(u) / std::log(params.p)));
    const double raw = std::pow(params.b, static_cast<double>(i));
    std::uint64_t cost;
    if (raw >= static_cast<double>(params.cost_cap))
        cost = params.cost_cap;
    else
        cost = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(raw)));
    return {cost, cost < params.cost_cap, static_cast<std::uint32_t>(i)};
}

namespace {

RuntimeSample collect(const std::function<ModelRunCost(Rng&)>& draw, std::uint64_t cap,
                      std::uint64_t trials, std::uint64_t seed) {
    RuntimeSample s;
    s.cap = cap;
    s.costs.reserve(trials);
    s.solved.reserve(trials);
    Rng rng(seed);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const ModelRunCost c = draw(rng);
        s.costs.push_back(c.cost);
        s.solved.push_back(c.solved_within_cap ? 1 : 0);
    }
    return s;
}

} // namespace

RuntimeSample sample_left_runtime(const LeftTailModelParams& params, std::uint64_t trials,
                                  std::uint64_t seed) {
    return collect([&](Rng& r) { return sample_left_cost(params, r); }, params.cost_cap, trials,
                   seed);
}

RuntimeSample sample_right_runtime(const RightTailModelParams& params, std::uint64_t trials,
                                   std::uint64_t seed) {
    return collect([&](Rng& r) { return sample_right_cost(params, r); }, params.cost_cap, trials,
                   seed);
}

Theorem1Report verify_theorem1(const LeftTailModelParams& base, std::span<const std::uint64_t> n_grid,
                               std::uint64_t trials, std::uint64_t seed) {
    Theorem1Report report;
    report.all_within_ci = true;
    report.strictly_decreasing = true;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        LeftTailModelParams params = base;
        params.n = n_grid[gi];

        Theorem1Row row;
        row.n = params.n;
        row.k = params.k();
        row.plan_length = params.plan_length();
        row.poly_threshold = params.poly_threshold();
        row.analytic = std::pow(params.p, static_cast<double>(row.k));

        Rng rng(derive_key(seed, params.n));
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < trials; ++t)
            if (sample_left_cost(params, rng).cost <= row.poly_threshold) ++hits;
        row.empirical = static_cast<double>(hits) / static_cast<double>(trials);
        row.ci_halfwidth =
            3.0 * std::sqrt(row.analytic * (1.0 - row.analytic) / static_cast<double>(trials));
        row.within_ci = std::abs(row.empirical - row.analytic) <= row.ci_halfwidth;

        report.all_within_ci = report.all_within_ci && row.within_ci;
        if (gi > 0 && row.empirical >= report.rows.back().empirical)
            report.strictly_decreasing = false;
        report.rows.push_back(row);
    }
    return report;
}

Theorem2Report verify_theorem2(const LeftTailModelParams& base, std::span<const std::uint64_t> n_grid,
                               std::uint64_t trials, std::uint64_t seed) {
    Theorem2Report report;
    report.mean_tracks_exponential = true;
    std::vector<double> log_n, log_l;
    for (std::uint64_t n : n_grid) {
        LeftTailModelParams params = base;
        params.n = n;

        const RuntimeSample sample =
            sample_left_runtime(params, trials, derive_key(seed, n, std::uint64_t{2}));
        const SampleRestartStats stats = sample_restart_stats(sample);

        Theorem2Row row;
        row.n = n;
        row.t_s = stats.t;
        row.l_s = stats.l;
        double total = 0.0;
        for (std::uint64_t c : sample.costs) total += static_cast<double>(c);
        row.mean_cost = total / static_cast<double>(sample.costs.size());
        row.wrong_subtree_cost = static_cast<double>(params.wrong_subtree_cost());
        row.p_poly = std::pow(params.p, static_cast<double>(params.k()));

        if (row.p_poly < 0.5 && row.mean_cost < 0.4 * row.wrong_subtree_cost)
            report.mean_tracks_exponential = false;

        log_n.push_back(std::log(static_cast<double>(n)));
        log_l.push_back(std::log(row.l_s));
        report.rows.push_back(row);
    }
    const LinearFit fit = linear_fit(log_n, log_l);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.r2 = fit.r2;
    return report;
}

} // namespace sokolab
