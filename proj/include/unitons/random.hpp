#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace unitons {

// Portable draws on top of mt19937_64. The std distributions are
// implementation-defined, which would break byte-exact golden files.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi].
    int integer(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(engine_() % span);
    }

    std::complex<double> gaussian_integer(int bound) {
        return {static_cast<double>(integer(-bound, bound)), static_cast<double>(integer(-bound, bound))};
    }

    std::complex<double> complex_uniform(double bound) { return {uniform(-bound, bound), uniform(-bound, bound)}; }

    // Uniform point in the closed disc |z| <= radius.
    std::complex<double> disc(double radius);

private:
    std::mt19937_64 engine_;
};

}  // namespace unitons
