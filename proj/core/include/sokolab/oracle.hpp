#pragma once

// Synthetic guidance oracles standing in for a trained network.
//
// value_matching: minimum-cost perfect matching of boxes to goals under per-box
// push distances (BFS over single-box positions, other boxes ignored), plus the
// player's walk distance to the nearest pushing cell of a not-yet-placed box.
// Unreachable configurations score a flat cap of 10 * width * height.
//
// policy_from_value: softmax over legal moves, prob(a) proportional to
// exp(-beta * h(child_a)).
//
// StochasticOracle wraps both with reproducible dropout-style noise: with rate
// rho (normalized rho' = rho/0.3) the value becomes h * exp(sigma * Z * rho')
// and the policy is mixed with a flat Dirichlet, (1-rho) * probs + rho * Dir(1).
// Noise streams are keyed by (seed, run key, state key), so a state's estimates
// are identical wherever it appears within one run, and rho = 0 reproduces the
// deterministic oracles bit for bit.

#include <array>
#include <cstdint>
#include <unordered_map>

#include "sokolab/board.hpp"

namespace sokolab {

struct ValueEstimate {
    double h = 0.0; // nonnegative; 0 exactly at goal states
};

struct PolicyEstimate {
    std::array<double, 4> prob{}; // indexed by Move; illegal moves stay 0
};

struct OracleConfig {
    double beta = 1.0;    // softmax sharpness
    double dropout = 0.3; // noise rate rho
    double sigma = 0.5;   // value noise scale
    std::uint64_t seed = 0;
};

double unreachable_value_cap(const Board& b); // 10 * width * height

ValueEstimate value_matching(const Board& b, const State& s);

PolicyEstimate policy_from_value(const Board& b, const State& s, double beta); // throws NoLegalMoves

class StochasticOracle {
public:
    StochasticOracle(const Board& b, OracleConfig cfg, std::uint64_t run_key)
        : board_(&b), cfg_(cfg), run_key_(run_key) {}

    double value(const State& s) const;
    PolicyEstimate policy(const State& s) const;

    const OracleConfig& config() const { return cfg_; }
    std::uint64_t run_key() const { return run_key_; }

private:
    const Board* board_;
    OracleConfig cfg_;
    std::uint64_t run_key_;
    // caches make repeat queries cheap; determinism is already guaranteed by the
    // state-keyed noise streams
    mutable std::unordered_map<State, double, StateHash> value_cache_;
    mutable std::unordered_map<State, PolicyEstimate, StateHash> policy_cache_;
};

} // namespace sokolab
