// Counter-based deterministic random number generation.
//
// All randomness in the library flows through CounterRng, a SplitMix64
// generator evaluated in counter mode: output(i) = mix64(seed + (i+1)*PHI64).
// The same (seed, draw order) pair therefore reproduces the same stream in
// any language with 64-bit integer arithmetic, which keeps generated
// instances and reports bit-stable across runs and implementations.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace fell {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed ^ mix64(stream * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull)) {}

    std::uint64_t next_u64() {
        ++counter_;
        return mix64(seed_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Standard real Gaussian via Box-Muller; consumes two uniforms per pair.
    std::pair<double, double> next_gaussian_pair() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [a, b] = next_gaussian_pair();
        spare_ = b;
        have_spare_ = true;
        return a;
    }

    /// Complex Gaussian with E|z|^2 = 1 (real and imaginary variance 1/2).
    std::complex<double> next_complex_gaussian() {
        auto [a, b] = next_gaussian_pair();
        return {a / std::numbers::sqrt2, b / std::numbers::sqrt2};
    }

    /// Unit-modulus complex number with uniform phase.
    std::complex<double> next_phase() {
        const double t = 2.0 * std::numbers::pi * next_double();
        return {std::cos(t), std::sin(t)};
    }

private:
    std::uint64_t seed_ = 0;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fell
