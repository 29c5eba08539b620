#include "sokolab/restart.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sokolab {

std::uint64_t luby_term(std::uint64_t i, std::uint64_t scale) {
    // closed-form recursion: i == 2^k - 1 yields 2^(k-1), otherwise recurse on
    // the position within the repeated prefix
    for (;;) {
        const int k = std::bit_width(i); // 2^(k-1) <= i < 2^k
        if (i == (std::uint64_t{1} << k) - 1) return scale << (k - 1);
        i -= (std::uint64_t{1} << (k - 1)) - 1;
    }
}

double expected_halting_time(const DiscreteRuntimeDistribution& d, std::uint64_t t) {
    double q = 0.0;       // success mass at or below t
    double shortfall = 0.0; // sum_{x<t} F(x) collapsed over support: r(s)*(t-s)
    for (const auto& [cost, r] : d.mass) {
        if (cost > t) break;
        q += r;
        shortfall += r * static_cast<double>(t - cost);
    }
    if (q <= 0.0) throw ZeroSuccessMass("no success mass at or below cutoff " + std::to_string(t));
    return (static_cast<double>(t) - shortfall) / q;
}

CutoffResult optimal_cutoff(const DiscreteRuntimeDistribution& d,
                            std::optional<std::uint64_t> horizon) {
    CutoffResult best;
    bool found = false;
    for (const auto& [cost, r] : d.mass) {
        if (horizon && cost > *horizon) break;
        const double l = expected_halting_time(d, cost);
        if (!found || l < best.l) { // strict: ties keep the smaller cutoff
            best = {cost, l};
            found = true;
        }
    }
    if (!found) throw ZeroSuccessMass("no finite support within horizon");
    return best;
}

SampleRestartStats sample_restart_stats(const RuntimeSample& s) {
    std::vector<std::uint64_t> sorted = s.costs;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    std::vector<std::uint64_t> candidates; // distinct solved costs, ascending
    for (std::size_t i = 0; i < s.costs.size(); ++i)
        if (s.solved[i]) candidates.push_back(s.costs[i]);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) throw NoSolvedRuns("sample has no solved runs");

    SampleRestartStats best;
    bool found = false;
    for (std::uint64_t u : candidates) {
        const auto at_most = static_cast<double>(
            std::upper_bound(sorted.begin(), sorted.end(), u) - sorted.begin());
        const double l = static_cast<double>(u) * n / at_most;
        if (!found || l < best.l) {
            best = {u, l};
            found = true;
        }
    }
    return best;
}

double universal_strategy_estimate(const RuntimeSample& s, std::uint64_t luby_scale) {
    std::vector<std::uint64_t> sorted = s.costs;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + static_cast<double>(sorted[i]);

    // E[min(v, t)] over the sample
    auto truncated_mean = [&](std::uint64_t t) {
        const std::size_t at_most = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        return (prefix[at_most] + static_cast<double>(t) * static_cast<double>(n - at_most)) /
               static_cast<double>(n);
    };

    std::uint64_t last = 1;
    while (luby_term(last, luby_scale) < s.cap) ++last; // first cutoff covering the cap

    double a = prefix[n] / static_cast<double>(n); // a_last: halts unconditionally, pays the draw
    for (std::uint64_t i = last; i-- > 1;) {
        const std::uint64_t t = luby_term(i, luby_scale);
        const std::size_t at_most = static_cast<std::size_t>(
            std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        const double p_continue = static_cast<double>(n - at_most) / static_cast<double>(n);
        a = truncated_mean(t) + p_continue * a;
    }
    return a;
}

ScheduleOutcome run_with_schedule(const AttemptRunner& runner, RestartSchedule schedule,
                                  std::uint64_t total_budget) {
    ScheduleOutcome out;
    while (out.total_cost < total_budget) {
        const std::uint64_t remaining = total_budget - out.total_cost;
        const std::uint64_t cutoff =
            std::min(schedule.cutoff(out.attempts + 1, total_budget), remaining);
        if (cutoff == 0) break;
        ++out.attempts;
        const AttemptOutcome attempt = runner(out.attempts, cutoff);
        out.total_cost += std::min(attempt.cost, cutoff);
        if (attempt.solved) {
            out.solved = true;
            return out;
        }
    }
    return out;
}

std::vector<std::size_t> n_restart_experiment(std::span<const InstanceRunner> instances,
                                              std::uint64_t total_budget, std::uint32_t n) {
    std::vector<std::size_t> solved;
    const std::uint64_t per_run = n == 0 ? 0 : total_budget / n;
    for (std::size_t idx = 0; idx < instances.size(); ++idx) {
        for (std::uint32_t run = 0; run < n; ++run) {
            if (instances[idx](run, per_run).solved) {
                solved.push_back(idx);
                break;
            }
        }
    }
    return solved;
}

} // namespace sokolab
