#pragma once

#include <cstdint>
#include <random>

namespace tsecon {

/// Deterministic random source. Draws are produced from the mt19937_64 bit
/// stream through inverse-CDF sampling, so a given seed yields the same
/// sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw on the open interval (0, 1).
    double uniform();

    /// Standard normal draw.
    double normal();

    /// Ordinary Student-t draw with df degrees of freedom.
    double student_t(double df);

    /// Unit-variance Student-t draw; requires df > 2.
    double std_t(double df);

private:
    std::mt19937_64 engine_;
};

} // namespace tsecon
