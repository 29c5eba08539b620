#pragma once

// Deterministic random primitives. Standard-library engines are portable but the
// <random> distributions are implementation-defined, which would break bit-exact
// reproducibility of runs across machines. Everything random in this library goes
// through the two generators below, so a (seed, key) pair yields the same stream
// on every host.
//
// Key derivation scheme: streams are identified by chaining derive_key over a base
// seed and one or more salts, e.g.
//   run key     = derive_key(config.seed, instance_index, run_id)
//   state noise = derive_key(run_key, state_key(state), tag)
// derive_key is the splitmix64 finalizer over (base + odd-constant * (salt+1)).

#include <array>
#include <cmath>
#include <cstdint>

namespace sokolab {

constexpr std::uint64_t mix_bits(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t derive_key(std::uint64_t base, std::uint64_t salt) {
    return mix_bits(base + 0x9e3779b97f4a7c15ull * (salt + 1));
}

template <typename... Salts>
constexpr std::uint64_t derive_key(std::uint64_t base, std::uint64_t salt, Salts... rest) {
    return derive_key(derive_key(base, salt), rest...);
}

// xoshiro256++ seeded through splitmix64, per the generator authors' recipe.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ull;
            w = mix_bits(x);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // [0,1), 53-bit resolution
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // (0,1], safe to feed into log()
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // uniform integer in [0, n); n >= 1
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Box-Muller
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double exponential() { return -std::log(uniform_pos()); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

} // namespace sokolab
