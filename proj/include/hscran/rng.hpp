#ifndef HSCRAN_RNG_HPP
#define HSCRAN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "hscran/types.hpp"

namespace hscran {

/// Seeded source for all Monte Carlo draws. Same seed, same sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance) {
        const double s = std::sqrt(variance / 2.0);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    double normal() { return normal_(engine_); }

    std::uint8_t bit() { return static_cast<std::uint8_t>(engine_() >> 63); }

    std::uint64_t next() { return engine_(); }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace hscran

#endif // HSCRAN_RNG_HPP
