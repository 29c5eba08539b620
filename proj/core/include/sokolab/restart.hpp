#pragma once

// Restart machinery for Las Vegas solvers with discrete runtime distributions.
//
// For cutoff t and runtime law r the expected halting time of restart-at-t is
//   l(t) = (1 / sum_{x<=t} r(x)) * (t - sum_{x<t} sum_{y<=x} r(y))
// minimized at l* = inf_t l(t). The Luby universal sequence 1,1,2,1,1,2,4,...
// comes within a logarithmic factor of l* without knowing r.
//
// Sample-side analogues over a capped empirical sample S (cap M, failed runs
// recorded at cost M):
//   t_S = argmin_u u*|S| / |{v in S : v <= u}|   (u over distinct solved costs)
//   l_S = t_S*|S| / |{v <= t_S}|
//   l_univ = expected cost of running the Luby sequence against draws from S,
//            by backward recurrence from the first cutoff >= M.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sokolab/errors.hpp"

namespace sokolab {

// Capped runtime sample. Every unsolved entry holds cost == cap; every cost is
// a positive integer <= cap.
struct RuntimeSample {
    std::vector<std::uint64_t> costs;
    std::vector<std::uint8_t> solved;
    std::uint64_t cap = 0;
};

struct DiscreteRuntimeDistribution {
    std::vector<std::pair<std::uint64_t, double>> mass; // (cost, prob), costs strictly increasing
    double mass_at_infinity = 0.0;
};

// i-th term (1-based) of the Luby sequence times scale:
// scale * 1,1,2,1,1,2,4,1,1,2,1,1,2,4,8,...
std::uint64_t luby_term(std::uint64_t i, std::uint64_t scale = 1);

// l(t); throws ZeroSuccessMass if the distribution has no mass at or below t.
double expected_halting_time(const DiscreteRuntimeDistribution& d, std::uint64_t t);

struct CutoffResult {
    std::uint64_t t = 0;
    double l = 0.0;
};

// argmin of l over support points <= horizon (default: all finite support);
// ties resolve to the smaller cutoff. Throws ZeroSuccessMass when no finite
// support lies in range.
CutoffResult optimal_cutoff(const DiscreteRuntimeDistribution& d,
                            std::optional<std::uint64_t> horizon = std::nullopt);

struct SampleRestartStats {
    std::uint64_t t = 0; // t_S
    double l = 0.0;      // l_S
};

SampleRestartStats sample_restart_stats(const RuntimeSample& s); // throws NoSolvedRuns

// Expected total cost of the scale*Luby strategy against the empirical law of s.
// An attempt with cutoff T draws v from s: v <= T halts at cost v, otherwise it
// pays T and continues; the first attempt with T >= cap halts unconditionally.
double universal_strategy_estimate(const RuntimeSample& s, std::uint64_t luby_scale = 1);

struct RestartSchedule {
    enum class Kind { None, Fixed, Luby };
    Kind kind = Kind::None;
    std::uint64_t param = 0; // Fixed: cutoff t; Luby: scale

    static RestartSchedule none() { return {Kind::None, 0}; }
    static RestartSchedule fixed(std::uint64_t t) { return {Kind::Fixed, t}; }
    static RestartSchedule luby(std::uint64_t scale) { return {Kind::Luby, scale}; }

    std::uint64_t cutoff(std::uint64_t attempt, std::uint64_t total_budget) const {
        switch (kind) {
            case Kind::Fixed: return param;
            case Kind::Luby: return luby_term(attempt, param);
            case Kind::None: default: return total_budget;
        }
    }
};

struct AttemptOutcome {
    bool solved = false;
    std::uint64_t cost = 0; // <= the cutoff it ran under
};

// One attempt of the underlying solver under a cutoff. attempt ids are 1-based.
using AttemptRunner = std::function<AttemptOutcome(std::uint64_t attempt, std::uint64_t cutoff)>;

struct ScheduleOutcome {
    bool solved = false;
    std::uint64_t total_cost = 0;
    std::uint64_t attempts = 0;
};

// Runs attempts under the schedule until success or the total budget is spent.
// Cutoffs are clipped to the remaining budget; total_cost never exceeds it.
ScheduleOutcome run_with_schedule(const AttemptRunner& runner, RestartSchedule schedule,
                                  std::uint64_t total_budget);

// One instance as a restartable solver: run_id selects the randomization.
using InstanceRunner = std::function<AttemptOutcome(std::uint32_t run_id, std::uint64_t budget)>;

// Splits total_budget across n independent runs per instance; an instance is
// solved when any run succeeds. Returns the solved instance indices.
std::vector<std::size_t> n_restart_experiment(std::span<const InstanceRunner> instances,
                                              std::uint64_t total_budget, std::uint32_t n);

} // namespace sokolab
