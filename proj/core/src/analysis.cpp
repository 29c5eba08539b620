#include "sokolab/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "sokolab/brute_force.hpp"

namespace sokolab {

std::vector<std::pair<std::uint64_t, double>> survival_function(const RuntimeSample& s) {
    std::vector<std::uint64_t> solved;
    for (std::size_t i = 0; i < s.costs.size(); ++i)
        if (s.solved[i]) solved.push_back(s.costs[i]);
    std::sort(solved.begin(), solved.end());
    solved.erase(std::unique(solved.begin(), solved.end()), solved.end());

    std::vector<std::uint64_t> all = s.costs;
    std::sort(all.begin(), all.end());
    const double n = static_cast<double>(all.size());

    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(solved.size());
    for (std::uint64_t c : solved) {
        const auto above = static_cast<double>(
            all.end() - std::upper_bound(all.begin(), all.end(), c));
        out.emplace_back(c, above / n);
    }
    return out;
}

double hill_alpha(std::span<const std::uint64_t> costs, std::size_t k) {
    if (k < 2 || k >= costs.size())
        throw std::invalid_argument("hill_alpha: need 2 <= k < sample size");
    std::vector<std::uint64_t> sorted(costs.begin(), costs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double threshold = static_cast<double>(sorted[n - k - 1]);
    if (threshold <= 0.0) throw DegenerateTail("hill_alpha: nonpositive threshold");
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j)
        sum += std::log(static_cast<double>(sorted[n - 1 - j]) / threshold);
    if (sum <= 0.0) throw DegenerateTail("hill_alpha: degenerate upper order statistics");
    return static_cast<double>(k) / sum;
}

const char* tail_label_name(TailLabel label) {
    switch (label) {
        case TailLabel::LeftHeavy: return "left-heavy";
        case TailLabel::RightHeavy: return "right-heavy";
        case TailLabel::Neither: return "neither";
    }
    return "?";
}

TailClassification classify_tail(const RuntimeSample& s, double gamma) {
    TailClassification out;
    const double n = static_cast<double>(s.costs.size());
    std::vector<std::uint64_t> solved_costs;
    std::size_t unsolved = 0;
    for (std::size_t i = 0; i < s.costs.size(); ++i) {
        if (s.solved[i])
            solved_costs.push_back(s.costs[i]);
        else
            ++unsolved;
    }
    out.unsolved_ratio = n > 0 ? static_cast<double>(unsolved) / n : 0.0;

    if (out.unsolved_ratio <= 0.10 && solved_costs.size() >= 20) {
        const std::size_t m = solved_costs.size();
        const std::array<double, 3> fractions{0.05, 0.10, 0.20};
        std::vector<double> alphas;
        bool computable = true;
        for (double frac : fractions) {
            std::size_t k = static_cast<std::size_t>(static_cast<double>(m) * frac);
            k = std::clamp<std::size_t>(k, 2, m - 1);
            try {
                alphas.push_back(hill_alpha(solved_costs, k));
            } catch (const DegenerateTail&) {
                computable = false;
                break;
            }
        }
        if (computable) {
            const auto [lo, hi] = std::minmax_element(alphas.begin(), alphas.end());
            out.alpha = alphas[1]; // k = 10%
            out.alpha_spread = *hi - *lo;
            out.plateau_stable = *hi - *lo <= 0.5;
            if (out.plateau_stable && *out.alpha <= 2.0) {
                out.label = TailLabel::RightHeavy;
                return out;
            }
        }
    }

    if (out.unsolved_ratio >= 0.90) {
        const double cut = gamma * static_cast<double>(s.cap);
        for (std::uint64_t c : solved_costs) {
            if (static_cast<double>(c) <= cut) {
                out.label = TailLabel::LeftHeavy;
                return out;
            }
        }
    }

    out.label = TailLabel::Neither;
    return out;
}

SubtreeHistogram dead_subtree_histogram(const SearchTrace& trace) {
    if (!trace.goal_node) throw TraceUnsolved("trace has no goal node");
    const std::size_t n = trace.log.size();

    std::vector<std::uint8_t> on_path(n, 0);
    for (std::int64_t id = static_cast<std::int64_t>(*trace.goal_node); id >= 0;
         id = trace.log[static_cast<std::size_t>(id)].parent)
        on_path[static_cast<std::size_t>(id)] = 1;

    // children have larger ids than parents, so one backward sweep accumulates
    // subtree sizes of the dead (off-path) forest
    std::vector<std::uint64_t> size(n, 0);
    SubtreeHistogram hist;
    for (std::size_t id = n; id-- > 0;) {
        if (on_path[id]) continue;
        size[id] += 1;
        const std::int64_t parent = trace.log[id].parent;
        if (parent >= 0 && !on_path[static_cast<std::size_t>(parent)])
            size[static_cast<std::size_t>(parent)] += size[id];
        else
            ++hist.bins[size[id]]; // parent on the plan path: id roots a dead subtree
    }
    return hist;
}

DeadEndBenchmarkResult dead_end_benchmark(std::span<const Board> corpus, const OracleConfig& cfg,
                                          std::size_t samples_per_level,
                                          std::size_t oracle_max_states) {
    DeadEndBenchmarkResult res;
    std::size_t policy_hits = 0, value_hits = 0;

    for (std::size_t li = 0; li < corpus.size(); ++li) {
        const Board& b = corpus[li];
        const BruteForceResult truth = brute_force_solve(b, oracle_max_states);
        if (truth.status == BruteForceStatus::Exhausted)
            throw OracleExhausted("dead-end benchmark: ground truth hit the state cap");
        if (truth.status != BruteForceStatus::Solved)
            throw std::invalid_argument("dead-end benchmark: corpus level is unsolvable");

        std::vector<State> along;
        along.push_back(initial_state(b));
        for (Move m : truth.plan) along.push_back(apply_move(b, along.back(), m));

        // evenly spaced positions among the plan states that still have a move
        const std::size_t m = truth.plan.size();
        std::vector<std::size_t> picks;
        if (samples_per_level >= m) {
            for (std::size_t i = 0; i < m; ++i) picks.push_back(i);
        } else {
            for (std::size_t j = 0; j < samples_per_level; ++j)
                picks.push_back(j * m / samples_per_level);
            picks.erase(std::unique(picks.begin(), picks.end()), picks.end());
        }

        StochasticOracle oracle(b, cfg, derive_key(cfg.seed, li));
        for (std::size_t i : picks) {
            const State& s = along[i];
            const Move plan_move = truth.plan[i];
            ++res.states_sampled;

            bool any_dead = false, policy_ok = true, value_ok = true;
            const PolicyEstimate policy = oracle.policy(s);
            const State plan_child = along[i + 1];
            const double plan_p = policy.prob[static_cast<int>(plan_move)];
            const double plan_h = oracle.value(plan_child);

            for (Move mv : legal_moves(b, s)) {
                if (mv == plan_move) continue;
                const State child = apply_move(b, s, mv);
                const BruteForceResult verdict = brute_force_solve(b, child, oracle_max_states);
                if (verdict.status == BruteForceStatus::Exhausted)
                    throw OracleExhausted("dead-end benchmark: ground truth hit the state cap");
                if (verdict.status != BruteForceStatus::Unsolvable) continue;
                any_dead = true;
                if (plan_p <= policy.prob[static_cast<int>(mv)]) policy_ok = false;
                if (plan_h >= oracle.value(child)) value_ok = false;
            }
            if (any_dead) {
                ++res.states_evaluated;
                if (policy_ok) ++policy_hits;
                if (value_ok) ++value_hits;
            }
        }
    }

    if (res.states_evaluated > 0) {
        res.policy_accuracy =
            static_cast<double>(policy_hits) / static_cast<double>(res.states_evaluated);
        res.value_accuracy =
            static_cast<double>(value_hits) / static_cast<double>(res.states_evaluated);
    }
    return res;
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    LinearFit fit;
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return fit;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

} // namespace sokolab
