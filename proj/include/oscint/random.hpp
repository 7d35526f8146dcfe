#pragma once

#include <cstdint>
#include <random>

#include "oscint/poly.hpp"

namespace oscint {

/// Independent generator for stream `index` under `seed` (SplitMix64 mixing),
/// so parallel loops can draw per-item randomness in any order.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform numerator in [-num_max, num_max] over a denominator in [1, den_max].
Rational random_rational(std::mt19937_64& rng, int num_max = 20, int den_max = 6);

/// Phase with every admissible monomial given an independent random coefficient.
PhasePoly random_phase(int nx, int nz, int m, std::mt19937_64& rng);

}  // namespace oscint
