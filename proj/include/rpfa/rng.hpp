#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "rpfa/errors.hpp"

namespace rpfa {

/// SplitMix64 finalizer, used only to derive child-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for the `index`-th child of a stream rooted at `seed`.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Deterministic random stream with explicit sub-stream derivation.
///
/// The engine is std::mt19937_64, whose output sequence is fully pinned by
/// the standard, and every sampler below is built from raw uniforms, so a
/// given (seed, call sequence) produces bit-identical results on any
/// platform. std:: distributions are avoided because their algorithms are
/// implementation-defined.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Independent child stream. Derivation depends only on this stream's
    /// root seed, never on how many draws have been consumed, so work units
    /// (students, replications) can be generated in any order or in parallel.
    RngStream derive(std::uint64_t index) const { return RngStream(mix_seed(seed_, index)); }

    std::uint64_t root_seed() const { return seed_; }

    /// Uniform double in [0, 1), 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + u01() * (b - a); }

    bool bernoulli(double p) { return u01() < p; }

    /// Unbiased integer in [0, n).
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw ParameterError("uniform_below: n must be positive");
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    /// Poisson by inversion (product of uniforms); fine for the small means
    /// used here (<= ~30).
    int poisson(double mean) {
        if (mean < 0) throw ParameterError("poisson: mean must be non-negative");
        const double limit = std::exp(-mean);
        int k = 0;
        double prod = 1.0;
        do {
            ++k;
            prod *= u01();
        } while (prod > limit);
        return k - 1;
    }

    /// Unit exponential.
    double exponential() { return -std::log1p(-u01()); }

    /// Gamma with integer shape, as a sum of unit exponentials.
    double gamma_int(int shape) {
        if (shape < 1) throw ParameterError("gamma_int: shape must be a positive integer");
        double acc = 0.0;
        for (int i = 0; i < shape; ++i) acc += exponential();
        return acc;
    }

    /// Beta(a, b) for integer parameters via the two-Gamma construction.
    double beta_int(int a, int b) {
        const double x = gamma_int(a);
        const double y = gamma_int(b);
        return x / (x + y);
    }

    /// Standard normal via the polar method.
    double normal() {
        for (;;) {
            const double u = 2.0 * u01() - 1.0;
            const double v = 2.0 * u01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace rpfa
