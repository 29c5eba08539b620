#include "sokolab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "sokolab/hungarian.hpp"
#include "sokolab/rng.hpp"

namespace sokolab {

double unreachable_value_cap(const Board& b) { return 10.0 * b.width * b.height; }

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// Push distances from one box cell to every cell, ignoring the other boxes.
// A push b -> b+d needs both b+d (target) and b-d (where the player stands)
// clear of walls.
std::vector<int> push_distances(const Board& b, std::int32_t box) {
    std::vector<int> dist(b.wall.size(), kUnreached);
    std::deque<std::int32_t> queue;
    dist[box] = 0;
    queue.push_back(box);
    while (!queue.empty()) {
        const std::int32_t cur = queue.front();
        queue.pop_front();
        const int x = cur % b.width, y = cur / b.width;
        for (Move m : kAllMoves) {
            const int tx = x + move_dx(m), ty = y + move_dy(m);
            const int px = x - move_dx(m), py = y - move_dy(m);
            if (b.is_wall(tx, ty) || b.is_wall(px, py)) continue;
            const std::int32_t next = b.cell(tx, ty);
            if (dist[next] != kUnreached) continue;
            dist[next] = dist[cur] + 1;
            queue.push_back(next);
        }
    }
    return dist;
}

// Player walk distances over non-wall cells, boxes ignored (they move).
std::vector<int> walk_distances(const Board& b, std::int32_t from) {
    std::vector<int> dist(b.wall.size(), kUnreached);
    std::deque<std::int32_t> queue;
    dist[from] = 0;
    queue.push_back(from);
    while (!queue.empty()) {
        const std::int32_t cur = queue.front();
        queue.pop_front();
        const int x = cur % b.width, y = cur / b.width;
        for (Move m : kAllMoves) {
            const int nx = x + move_dx(m), ny = y + move_dy(m);
            if (b.is_wall(nx, ny)) continue;
            const std::int32_t next = b.cell(nx, ny);
            if (dist[next] != kUnreached) continue;
            dist[next] = dist[cur] + 1;
            queue.push_back(next);
        }
    }
    return dist;
}

} // namespace

ValueEstimate value_matching(const Board& b, const State& s) {
    const int m = static_cast<int>(s.boxes.size());
    const double cap = unreachable_value_cap(b);

    std::vector<std::vector<double>> cost(m, std::vector<double>(m));
    std::vector<std::vector<int>> dists;
    dists.reserve(m);
    for (int i = 0; i < m; ++i) dists.push_back(push_distances(b, s.boxes[i]));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const int d = dists[i][b.goals[j]];
            cost[i][j] = d == kUnreached ? kInfeasibleEdge : d;
        }

    const AssignmentResult assignment = hungarian_min_cost(cost);
    if (assignment.cost >= kInfeasibleEdge) return {cap};

    // Player term: walk distance to the nearest pushing cell of a box that is
    // not yet resting on a goal.
    double player_term = 0.0;
    bool any_unplaced = false;
    int nearest = kUnreached;
    const std::vector<int> walk = walk_distances(b, s.player);
    for (std::int32_t box : s.boxes) {
        if (b.goal[box]) continue;
        any_unplaced = true;
        const int x = box % b.width, y = box / b.width;
        for (Move mv : kAllMoves) {
            const int px = x - move_dx(mv), py = y - move_dy(mv);
            const int tx = x + move_dx(mv), ty = y + move_dy(mv);
            if (b.is_wall(px, py) || b.is_wall(tx, ty)) continue;
            nearest = std::min(nearest, walk[b.cell(px, py)]);
        }
    }
    if (any_unplaced) {
        if (nearest == kUnreached) return {cap};
        player_term = nearest;
    }

    return {assignment.cost + player_term};
}

PolicyEstimate policy_from_value(const Board& b, const State& s, double beta) {
    const std::vector<Move> legal = legal_moves(b, s);
    if (legal.empty()) throw NoLegalMoves("no legal moves");

    std::array<double, 4> h{};
    double hmin = std::numeric_limits<double>::infinity();
    for (Move m : legal) {
        h[static_cast<int>(m)] = value_matching(b, apply_move(b, s, m)).h;
        hmin = std::min(hmin, h[static_cast<int>(m)]);
    }
    PolicyEstimate out;
    double total = 0.0;
    for (Move m : legal) {
        const double w = std::exp(-beta * (h[static_cast<int>(m)] - hmin));
        out.prob[static_cast<int>(m)] = w;
        total += w;
    }
    for (Move m : legal) out.prob[static_cast<int>(m)] /= total;
    return out;
}

namespace {

// Stream tags keep value and policy noise independent per state.
constexpr std::uint64_t kValueTag = 0x56414c55ull;  // "VALU"
constexpr std::uint64_t kPolicyTag = 0x504f4c49ull; // "POLI"

} // namespace

double StochasticOracle::value(const State& s) const {
    if (auto it = value_cache_.find(s); it != value_cache_.end()) return it->second;
    double h = value_matching(*board_, s).h;
    if (cfg_.dropout > 0.0) {
        const double rho_norm = cfg_.dropout / 0.3;
        Rng rng(derive_key(cfg_.seed, run_key_, state_key(s), kValueTag));
        h *= std::exp(cfg_.sigma * rng.normal() * rho_norm);
    }
    value_cache_.emplace(s, h);
    return h;
}

PolicyEstimate StochasticOracle::policy(const State& s) const {
    if (auto it = policy_cache_.find(s); it != policy_cache_.end()) return it->second;
    PolicyEstimate est = policy_from_value(*board_, s, cfg_.beta);
    if (cfg_.dropout > 0.0) {
        Rng rng(derive_key(cfg_.seed, run_key_, state_key(s), kPolicyTag));
        const std::vector<Move> legal = legal_moves(*board_, s);
        std::array<double, 4> dir{};
        double total = 0.0;
        for (Move m : legal) { // fixed U,D,L,R draw order
            dir[static_cast<int>(m)] = rng.exponential();
            total += dir[static_cast<int>(m)];
        }
        double renorm = 0.0;
        for (Move m : legal) {
            const int i = static_cast<int>(m);
            est.prob[i] = (1.0 - cfg_.dropout) * est.prob[i] + cfg_.dropout * dir[i] / total;
            renorm += est.prob[i];
        }
        for (Move m : legal) est.prob[static_cast<int>(m)] /= renorm;
    }
    policy_cache_.emplace(s, est);
    return est;
}

} // namespace sokolab
