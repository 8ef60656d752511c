#pragma once

#include <cmath>
#include <cstdint>

namespace scatface {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, repeat, stream).  Equal keys always
/// replay the same sequence; consuming one stream never perturbs another.
class KeyedRng {
public:
    KeyedRng(std::uint64_t seed, std::uint64_t repeat, std::uint64_t stream)
        : state_(seed) {
        state_ = splitmix64(state_) ^ (repeat * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull);
        state_ = splitmix64(state_) ^ (stream * 0xaf251af3b0f025b5ull + 0x9e6c63d0a48da2b1ull);
    }

    std::uint64_t next() { return splitmix64(state_); }

    std::uint64_t next_below(std::uint64_t n) { return n ? next() % n : 0; }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal (Box-Muller).
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        while (u == 0.0) u = next_unit();
        double v = next_unit();
        double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(6.283185307179586 * v);
        have_spare_ = true;
        return r * std::cos(6.283185307179586 * v);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace scatface
