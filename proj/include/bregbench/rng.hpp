#ifndef BREGBENCH_RNG_HPP
#define BREGBENCH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

namespace bregbench {

/// Seeded random source with hand-rolled distributions. mt19937_64 output is
/// pinned by the standard, and deriving uniforms/normals/categoricals by hand
/// keeps generated datasets identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller. One fresh pair per call; the second
    /// value is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// Index drawn proportionally to the (non-negative) weights. Weights need
    /// not be normalized.
    std::size_t categorical(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights)
            total += w;
        const double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc)
                return i;
        }
        return weights.size() - 1;
    }

    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n) {
        // Rejection-free modulo bias is negligible for n << 2^64, but keep it
        // exact anyway.
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = engine_();
        while (x >= limit)
            x = engine_();
        return static_cast<std::size_t>(x % n);
    }

    /// Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace bregbench

#endif // BREGBENCH_RNG_HPP
