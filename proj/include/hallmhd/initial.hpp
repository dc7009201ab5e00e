#pragma once

#include <cstdint>
#include <string>

#include "hallmhd/mhd3d.hpp"

namespace hallmhd {

struct InitialSpec {
  /// beltrami | random_band | taylor_green | zero
  std::string kind = "random_band";
  /// beltrami, taylor_green: coefficient multiplying the unit-amplitude
  /// pattern. random_band: L2 norm (RMS) of each of u and B.
  double amplitude = 0.01;
  double lo = 1.0;
  double hi = 4.0;
  double slope = 0.0;
  std::uint64_t seed = 1;
};

/// Beltrami pattern with curl w = w. 3D: the ABC field
/// (sin z + cos y, sin x + cos z, sin y + cos x); 2.5D: (cos y, sin x, sin y + cos x).
SpectralVector beltrami_field(const GridPtr& grid);

/// (u0, B0) and, for the extended formulation, v0 = u0 - eps curl B0.
/// Fields are divergence free, mean free and Hermitian; amplitude must be > 0
/// except for the zero kind.
State make_initial(const GridPtr& grid, const InitialSpec& spec, const PhysicalParams& p, Formulation f);

}  // namespace hallmhd
