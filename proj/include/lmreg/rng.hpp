#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace lmreg {

// SplitMix64 finalizer. Used to derive independent stream seeds from a
// master seed and a path of identifiers, so that replications and streams
// can be regenerated in isolation and results do not depend on scheduling.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Chain-mix a seed with a sequence of stream/replication identifiers.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(master);
    for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
    return s;
}

// Stable identifier for a double-valued parameter (e.g. a grid value of H).
inline std::uint64_t param_id(double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    __builtin_memcpy(&bits, &v, sizeof(bits));
    return bits;
}

// Standard normal stream with explicit Box-Muller state. The transform is
// spelled out here rather than taken from std::normal_distribution so the
// byte stream is pinned by this code, not by the standard library build.
class GaussianStream {
  public:
    explicit GaussianStream(std::uint64_t seed) : eng_(mix64(seed)) {}

    double uniform() {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    std::vector<double> draw(std::size_t n) {
        std::vector<double> out(n);
        for (auto& x : out) x = next();
        return out;
    }

    std::uint64_t next_u64() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace lmreg
