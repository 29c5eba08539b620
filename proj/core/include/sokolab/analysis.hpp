#pragma once

// Runtime-distribution analytics.
//
// hill_alpha over the k largest order statistics:
//   alpha = k / sum_{j=1..k} ln(x_(n-j+1) / x_(n-k))
//
// classify_tail labels a capped sample:
//   RightHeavy: unsolved ratio <= 0.10 and the Hill estimate over solved costs
//               is <= 2 with a stable plateau (k at 5%, 10%, 20% of the solved
//               sample, max-min <= 0.5)
//   LeftHeavy:  unsolved ratio >= 0.90 and at least one solved cost <= gamma*cap
//   Neither otherwise.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "sokolab/board.hpp"
#include "sokolab/oracle.hpp"
#include "sokolab/restart.hpp"
#include "sokolab/search.hpp"

namespace sokolab {

// Empirical CCDF sampled at each distinct solved cost (ascending); unsolved
// mass sits at the cap and keeps the survival probabilities up.
std::vector<std::pair<std::uint64_t, double>> survival_function(const RuntimeSample& s);

// costs need not be sorted; 2 <= k < costs.size(). Throws DegenerateTail when
// the k+1 largest values coincide (zero denominator).
double hill_alpha(std::span<const std::uint64_t> costs, std::size_t k);

enum class TailLabel { LeftHeavy, RightHeavy, Neither };

const char* tail_label_name(TailLabel label);

struct TailClassification {
    TailLabel label = TailLabel::Neither;
    double unsolved_ratio = 0.0;
    std::optional<double> alpha;       // Hill estimate at k = 10% when computable
    std::optional<double> alpha_spread; // max-min over the plateau ks
    bool plateau_stable = false;
};

TailClassification classify_tail(const RuntimeSample& s, double gamma = 0.1);

// Sizes of the maximal expansion-tree subtrees that contain no node of the
// root-to-goal path, as a size -> count histogram. Throws TraceUnsolved when
// the trace has no goal node.
struct SubtreeHistogram {
    std::map<std::uint64_t, std::uint64_t> bins;

    std::uint64_t total_nodes() const {
        std::uint64_t total = 0;
        for (const auto& [size, count] : bins) total += size * count;
        return total;
    }
};

SubtreeHistogram dead_subtree_histogram(const SearchTrace& trace);

// Walks brute-force optimal plans, samples states that have at least one
// dead-end child (a child from which the goal is unreachable), and scores how
// often the oracles separate the plan child from every dead-end child: policy
// must put strictly higher probability on the plan move, value must give the
// plan child a strictly lower estimate. Throws OracleExhausted if ground truth
// hits the state cap.
struct DeadEndBenchmarkResult {
    std::size_t states_sampled = 0;   // plan states examined
    std::size_t states_evaluated = 0; // of those, states with >= 1 dead-end child
    double policy_accuracy = 0.0;     // fraction of evaluated states
    double value_accuracy = 0.0;
};

DeadEndBenchmarkResult dead_end_benchmark(std::span<const Board> corpus, const OracleConfig& cfg,
                                          std::size_t samples_per_level,
                                          std::size_t oracle_max_states);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

} // namespace sokolab
