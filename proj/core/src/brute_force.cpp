#include "sokolab/brute_force.hpp"

#include <algorithm>
#include <unordered_map>

namespace sokolab {

BruteForceResult brute_force_solve(const Board& b, const State& from, std::size_t max_states) {
    BruteForceResult res;
    if (is_goal(b, from)) {
        res.status = BruteForceStatus::Solved;
        res.visited = 1;
        return res;
    }
    if (max_states == 0) return res; // Exhausted

    struct Entry {
        State state;
        std::int64_t parent;
        Move via;
    };
    std::vector<Entry> arena;
    std::unordered_map<State, std::size_t, StateHash> seen;
    arena.push_back({from, -1, Move::Up});
    seen.emplace(from, 0);

    auto reconstruct = [&](std::int64_t leaf, Move last) {
        std::vector<Move> plan{last};
        for (std::int64_t i = leaf; arena[static_cast<std::size_t>(i)].parent >= 0;
             i = arena[static_cast<std::size_t>(i)].parent)
            plan.push_back(arena[static_cast<std::size_t>(i)].via);
        std::reverse(plan.begin(), plan.end());
        return plan;
    };

    for (std::size_t head = 0; head < arena.size(); ++head) {
        const State cur = arena[head].state; // copy: arena may reallocate
        for (Move m : kAllMoves) {
            if (!is_legal_move(b, cur, m)) continue;
            State child = apply_move(b, cur, m);
            if (seen.count(child)) continue;
            if (is_goal(b, child)) {
                res.status = BruteForceStatus::Solved;
                res.plan = reconstruct(static_cast<std::int64_t>(head), m);
                res.visited = arena.size();
                return res;
            }
            if (arena.size() >= max_states) {
                res.status = BruteForceStatus::Exhausted;
                res.visited = arena.size();
                return res;
            }
            seen.emplace(child, arena.size());
            arena.push_back({std::move(child), static_cast<std::int64_t>(head), m});
        }
    }
    res.status = BruteForceStatus::Unsolvable;
    res.visited = arena.size();
    return res;
}

bool plan_solves(const Board& b, const std::vector<Move>& plan) {
    State s = initial_state(b);
    for (Move m : plan) {
        if (!is_legal_move(b, s, m)) return false;
        s = apply_move(b, s, m);
    }
    return is_goal(b, s);
}

} // namespace sokolab
