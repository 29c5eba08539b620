#pragma once

// Policy/value guided best-first search.
//
// Node bookkeeping per the usual conventions: g = depth, h = value estimate of
// the node's state, p = probability the parent's policy gave the edge into the
// node, pi = product of edge probabilities along the path from the root.
//
// Evaluation functions (lower f expands first):
//   Depth         f = g
//   Greedy        f = h
//   DepthValue(w) f = g + w*h
//   PurePolicy    f = 1/p
//   PHS           f = (g + h) / pi
//   PHSStar       f = (g + h) / pi^(1 + h/g)
//   PolicyGreedy  f = h / p
//   Ours(w)       f = (g + w*h) / p
// p and pi are clamped below at 1e-9 (and pi at double-min) before use.
//
// The engine pops the minimum-f node (FIFO on ties), expands its children in
// fixed U,D,L,R order, skips any child state generated before (first entry is
// kept, no reopening), and tests children for the goal at generation time.
// Expansions count pops. Given (seed, config, eval, level) the run is
// bit-identical on any host.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sokolab/board.hpp"
#include "sokolab/oracle.hpp"
#include "sokolab/restart.hpp"

namespace sokolab {

enum class EvalVariant : std::uint8_t {
    Depth,
    Greedy,
    DepthValue,
    PurePolicy,
    PHS,
    PHSStar,
    PolicyGreedy,
    Ours,
};

struct EvalFunction {
    EvalVariant variant = EvalVariant::Ours;
    double weight = 1.0; // used by DepthValue and Ours
};

const char* eval_name(EvalVariant v);
EvalFunction parse_eval(const std::string& name, double weight = 1.0); // throws UsageError

// f for a node with the given statistics; PHSStar requires g >= 1.
double eval_f(EvalFunction eval, std::uint64_t g, double h, double p, double pi);

enum class SearchStatus { Solved, BudgetExhausted, ProvedUnsolvable };

struct TraceEntry {
    std::uint64_t node = 0;
    std::int64_t parent = -1; // -1 for the root
    std::uint64_t state = 0;  // state_key
    std::uint64_t g = 0;
    double h = 0.0;
    double p = 1.0;
    double f = 0.0;
};

// Expansion log in pop order, node ids dense from 0. When the search solves,
// the generated goal node is appended as the final entry and goal_node set.
struct SearchTrace {
    std::vector<TraceEntry> log;
    std::optional<std::uint64_t> goal_node;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::BudgetExhausted;
    std::vector<Move> plan;
    std::uint64_t expansions = 0;
    SearchTrace trace;
};

SearchOutcome best_first_search(const Board& b, EvalFunction eval, const StochasticOracle& oracle,
                                std::uint64_t budget, bool record_trace = false);

// n independent randomized runs (run key = derive_key(cfg.seed, run_id)), each
// under the expansion budget; failures are recorded at cost budget, solves at
// their expansion count. Returns the capped sample (cap = budget).
RuntimeSample run_randomized(const Board& b, EvalFunction eval, const OracleConfig& cfg,
                             std::uint64_t budget, std::uint32_t n_runs);

std::string trace_to_edge_list(const SearchTrace& t);
SearchTrace trace_from_edge_list(const std::string& text); // throws UsageError on bad input

} // namespace sokolab
