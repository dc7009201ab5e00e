#include "hallmhd/random.hpp"

#include <cmath>
#include <random>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"

namespace hallmhd {

namespace {

void fill(const Grid& g, std::span<Complex> c, double lo, double hi, double slope, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto k2 = g.k2();
  for (std::size_t i = 0; i < c.size(); ++i) {
    // Draw for every mode so the stream does not depend on the band.
    const double re = normal(rng), im = normal(rng);
    if (i == 0 || !g.retained(i) || k2[i] < lo * lo || k2[i] > hi * hi) continue;
    const double amp = std::pow(k2[i], -0.5 * slope);
    c[i] = Complex(re * amp, im * amp);
  }
  enforce_hermitian(g, c);
}

void check_band(double lo, double hi) {
  if (!(lo >= 0.0) || !(lo <= hi)) throw ArgumentError("random field: need 0 <= lo <= hi");
}

}  // namespace

SpectralScalar random_scalar(const GridPtr& grid, double lo, double hi, double slope, std::uint64_t seed) {
  check_band(lo, hi);
  std::mt19937_64 rng(seed);
  SpectralScalar out(grid);
  fill(*grid, out.data(), lo, hi, slope, rng);
  return out;
}

SpectralVector random_vector(const GridPtr& grid, double lo, double hi, double slope, std::uint64_t seed,
                             bool divfree) {
  check_band(lo, hi);
  std::mt19937_64 rng(seed);
  SpectralVector out(grid);
  for (int c = 0; c < 3; ++c) fill(*grid, out[c], lo, hi, slope, rng);
  if (divfree) out = leray_project(out);
  return out;
}

}  // namespace hallmhd
