#pragma once

// Exhaustive breadth-first search over full states. Serves as ground truth for
// level generation, optimality checks and dead-end labelling. No pruning beyond
// duplicate detection: a state is unsolvable only if its entire reachable space
// holds no goal.

#include <cstddef>
#include <vector>

#include "sokolab/board.hpp"

namespace sokolab {

enum class BruteForceStatus { Solved, Unsolvable, Exhausted };

struct BruteForceResult {
    BruteForceStatus status = BruteForceStatus::Exhausted;
    std::vector<Move> plan;     // shortest move plan when Solved
    std::size_t visited = 0;    // states stored
};

BruteForceResult brute_force_solve(const Board& b, const State& from, std::size_t max_states);

inline BruteForceResult brute_force_solve(const Board& b, std::size_t max_states) {
    return brute_force_solve(b, initial_state(b), max_states);
}

// Replays a plan from the initial state; true iff every move is legal and the
// final state is a goal.
bool plan_solves(const Board& b, const std::vector<Move>& plan);

} // namespace sokolab
