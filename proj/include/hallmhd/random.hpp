#pragma once

#include <cstdint>

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Seeded Gaussian coefficients on lo <= |k| <= hi (inside the dealias mask),
/// scaled by |k|^-slope. Hermitian, mean free, not normalized.
SpectralScalar random_scalar(const GridPtr& grid, double lo, double hi, double slope, std::uint64_t seed);
/// Same per component; `divfree` applies the Leray projection afterwards.
SpectralVector random_vector(const GridPtr& grid, double lo, double hi, double slope, std::uint64_t seed,
                             bool divfree);

}  // namespace hallmhd
