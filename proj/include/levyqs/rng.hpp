#pragma once

#include <cmath>
#include <cstdint>

namespace levyqs {

// SplitMix64 (Steele-Lea-Vigna). Path i of a run with seed s uses the
// stream with initial state s + (i+1) * 0x9E3779B97F4A7C15; this derivation
// is part of the output contract (results are invariant to worker count)
// and is recorded in run metadata.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : s_(state) {}

    std::uint64_t next() {
        std::uint64_t z = (s_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform on (0,1), never 0 or 1
    double uniform() { return (double(next() >> 11) + 0.5) * 0x1.0p-53; }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double th = 6.283185307179586476925286766559 * uniform();
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    // P(N = n) = (1-p) p^n on {0, 1, ...}
    std::uint64_t geometric(double p) {
        if (p <= 0.0) return 0;
        return static_cast<std::uint64_t>(std::floor(std::log(uniform()) / std::log(p)));
    }

private:
    std::uint64_t s_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline SplitMix64 path_stream(std::uint64_t seed, std::uint64_t path_index) {
    return SplitMix64(seed + (path_index + 1) * 0x9E3779B97F4A7C15ULL);
}

} // namespace levyqs
