#pragma once

// Abstract tree models reproducing the two heavy-tail regimes.
//
// Left-tail model (few lucky runs are fast, most are hopeless): a run follows a
// plan of length L(n) = ceil(n^a). At each of the k(n) = ceil(c*log2 n)
// critical branchings the guidance picks the correct child with probability p;
// a wrong pick costs a full misleading subtree E(n) = min(2^n, costCap). Every
// plan step additionally pays a detour Uniform{0..detourMax}. Run cost:
//   cost = L(n) + sum detours + (#wrong picks) * E(n),  saturating at costCap.
// With all picks right the cost is at most L(n)*(1+detourMax) (polynomial),
// so Pr[cost <= polyThreshold] = p^k(n), which vanishes polynomially while the
// unrestarted expectation is dominated by E(n).
//
// Right-tail model (most runs are fine, rare runs blow up): the number of
// backdoor misses i is geometric, P(i) = p^i*(1-p), and cost = round(b^i),
// saturating at costCap. E[cost] = (1-p)/(1-p*b) for p*b < 1; the survival
// function at b^i is p^(i+1), a Pareto-like tail with exponent ln(1/p)/ln b.

#include <cstdint>
#include <span>
#include <vector>

#include "sokolab/restart.hpp"
#include "sokolab/rng.hpp"

namespace sokolab {

struct LeftTailModelParams {
    std::uint64_t n = 16;
    double p = 0.9;
    double c = 2.0;
    double a = 1.5;
    std::uint32_t detour_max = 5;
    std::uint64_t cost_cap = std::uint64_t{1} << 40;

    std::uint64_t k() const;               // ceil(c * log2 n)
    std::uint64_t plan_length() const;     // ceil(n^a)
    std::uint64_t wrong_subtree_cost() const; // min(2^n, cost_cap)
    std::uint64_t poly_threshold() const;  // plan_length * (1 + detour_max)
};

struct RightTailModelParams {
    double p = 0.5;
    double b = 4.0;
    std::uint64_t cost_cap = std::uint64_t{1} << 40;

    double expected_cost() const; // (1-p)/(1-p*b), requires p*b < 1
    double tail_alpha() const;    // ln(1/p) / ln(b)
};

struct ModelRunCost {
    std::uint64_t cost = 0;
    bool solved_within_cap = false;   // cost < cost_cap
    std::uint32_t critical_mistakes = 0; // left: wrong picks; right: backdoor misses
};

// Draw order is fixed (left: L detours then k picks) so samples are stable
// under a given Rng stream.
ModelRunCost sample_left_cost(const LeftTailModelParams& params, Rng& rng);
ModelRunCost sample_right_cost(const RightTailModelParams& params, Rng& rng);

RuntimeSample sample_left_runtime(const LeftTailModelParams& params, std::uint64_t trials,
                                  std::uint64_t seed);
RuntimeSample sample_right_runtime(const RightTailModelParams& params, std::uint64_t trials,
                                   std::uint64_t seed);

// Solvability-phase check: empirical Pr[cost <= polyThreshold] against the
// analytic p^k(n) with a 3-sigma binomial interval, across a grid of n.
struct Theorem1Row {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::uint64_t plan_length = 0;
    std::uint64_t poly_threshold = 0;
    double analytic = 0.0;
    double empirical = 0.0;
    double ci_halfwidth = 0.0; // 3 sigma
    bool within_ci = false;
};

struct Theorem1Report {
    std::vector<Theorem1Row> rows;
    bool all_within_ci = false;
    bool strictly_decreasing = false; // empirical, across the grid
};

Theorem1Report verify_theorem1(const LeftTailModelParams& base, std::span<const std::uint64_t> n_grid,
                               std::uint64_t trials, std::uint64_t seed);

// Restart-benefit check: the sample-optimal restart estimate l_S grows like a
// power of n (log-log fit) while the unrestarted mean tracks E(n).
struct Theorem2Row {
    std::uint64_t n = 0;
    std::uint64_t t_s = 0;
    double l_s = 0.0;
    double mean_cost = 0.0;
    double wrong_subtree_cost = 0.0;
    double p_poly = 0.0; // p^k
};

struct Theorem2Report {
    std::vector<Theorem2Row> rows;
    double slope = 0.0; // of log l_S against log n
    double intercept = 0.0;
    double r2 = 0.0;
    bool mean_tracks_exponential = false; // mean >= 0.4*E(n) wherever p^k < 0.5
};

Theorem2Report verify_theorem2(const LeftTailModelParams& base, std::span<const std::uint64_t> n_grid,
                               std::uint64_t trials, std::uint64_t seed);

} // namespace sokolab
