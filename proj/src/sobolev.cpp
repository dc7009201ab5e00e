#include "hallmhd/sobolev.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"

namespace hallmhd {

namespace {

double weighted_sum(const Grid& g, double s, bool skip_mean, auto&& pair_value) {
  const auto k2 = g.k2();
  const auto w = g.weight();
  double sum = 0.0;
  for (std::size_t i = skip_mean ? 1 : 0; i < k2.size(); ++i) {
    const double m = s == 0.0 ? 1.0 : std::pow(k2[i], s);
    sum += w[i] * m * pair_value(i);
  }
  return sum;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite coefficients");
}

double norm2(std::complex<double> c) { return c.real() * c.real() + c.imag() * c.imag(); }

}  // namespace

double hs_norm(const SpectralVector& f, double s) {
  if (s < 0.0) require_mean_free(f, "hs_norm");
  const double v = weighted_sum(f.grid(), s, s != 0.0,
                                [&](std::size_t i) { return norm2(f[0][i]) + norm2(f[1][i]) + norm2(f[2][i]); });
  check_finite(v, "hs_norm");
  return std::sqrt(v);
}

double hs_norm(const SpectralScalar& f, double s) {
  if (s < 0.0 && std::abs(f[0]) > 1e-12 * std::max(l2_norm(f), 1e-300)) {
    throw DomainError("hs_norm: field has a nonzero mean mode");
  }
  const double v = weighted_sum(f.grid(), s, s != 0.0, [&](std::size_t i) { return norm2(f[i]); });
  check_finite(v, "hs_norm");
  return std::sqrt(v);
}

double hs_inner(const SpectralVector& a, const SpectralVector& b, double s) {
  require_same_grid(a.grid(), b.grid(), "hs_inner");
  auto re = [](Complex x, Complex y) { return x.real() * y.real() + x.imag() * y.imag(); };
  return weighted_sum(a.grid(), s, s != 0.0, [&](std::size_t i) {
    return re(a[0][i], b[0][i]) + re(a[1][i], b[1][i]) + re(a[2][i], b[2][i]);
  });
}

double h_norm(const SpectralVector& f, double s) {
  const auto& g = f.grid();
  const auto k2 = g.k2();
  const auto w = g.weight();
  double sum = 0.0;
  for (std::size_t i = 0; i < k2.size(); ++i)
    sum += w[i] * std::pow(1.0 + k2[i], s) * (norm2(f[0][i]) + norm2(f[1][i]) + norm2(f[2][i]));
  check_finite(sum, "h_norm");
  return std::sqrt(sum);
}

SpectralScalar pad(const SpectralScalar& f, const GridPtr& fine) {
  const auto& g = f.grid();
  if (fine->dim() != g.dim() || fine->n() < g.n()) throw ShapeError("pad: target grid must be finer");
  SpectralScalar out(fine);
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    if (g.nyquist(i)) continue;
    const auto [a, b, c] = g.lattice(i);
    out[fine->index_of(a, b, c)] = f[i];
  }
  return out;
}

SpectralVector pad(const SpectralVector& f, const GridPtr& fine) {
  const auto& g = f.grid();
  if (fine->dim() != g.dim() || fine->n() < g.n()) throw ShapeError("pad: target grid must be finer");
  SpectralVector out(fine, f.is_divfree());
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    if (g.nyquist(i)) continue;
    const auto [a, b, c] = g.lattice(i);
    const auto j = fine->index_of(a, b, c);
    for (int comp = 0; comp < 3; ++comp) out[comp][j] = f[comp][i];
  }
  return out;
}

PhysicalScalar oversample(const SpectralScalar& f, int factor) {
  if (factor < 1) throw ArgumentError("oversample: factor must be >= 1");
  return to_physical(pad(f, Grid::make(f.grid().dim(), f.grid().n() * factor)));
}

namespace {

void check_p(double p) {
  if (!(p >= 1.0)) throw ArgumentError("lp_norm: need p in [1, inf]");
}

double lp_of_magnitudes(std::span<const double> mag, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : mag) m = std::max(m, std::abs(x));
    return m;
  }
  // Scale by the max to keep |x|^p representable for large p.
  double m = 0.0;
  for (double x : mag) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  const double inv = 1.0 / m;
  if (p == 2.0 || p == 4.0 || p == 6.0) {
    const int half = int(p) / 2;
    for (double x : mag) {
      const double y = x * inv * x * inv;
      s += half == 1 ? y : half == 2 ? y * y : y * y * y;
    }
  } else {
    for (double x : mag) s += std::pow(std::abs(x) * inv, p);
  }
  return m * std::pow(s / double(mag.size()), 1.0 / p);
}

}  // namespace

double lp_norm_samples(const PhysicalScalar& f, double p) {
  check_p(p);
  return lp_of_magnitudes(f.data(), p);
}

double lp_norm(const SpectralScalar& f, double p) {
  check_p(p);
  return lp_of_magnitudes(oversample(f, 2).data(), p);
}

double lp_norm(const SpectralVector& f, double p) {
  check_p(p);
  const auto fine = Grid::make(f.grid().dim(), 2 * f.grid().n());
  const auto phys = to_physical(pad(f, fine));
  PhysicalScalar mag(fine);
  for (std::size_t i = 0; i < fine->real_size(); ++i)
    mag[i] = std::sqrt(phys[0][i] * phys[0][i] + phys[1][i] * phys[1][i] + phys[2][i] * phys[2][i]);
  return lp_of_magnitudes(mag.data(), p);
}

InterpolationResult interpolation_check(const SpectralVector& f, double s0, double s1, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ArgumentError("interpolation_check: theta outside [0, 1]");
  const double s = (1.0 - theta) * s0 + theta * s1;
  InterpolationResult r;
  r.lhs = hs_norm(f, s);
  const double a = hs_norm(f, s0), b = hs_norm(f, s1);
  r.rhs = std::pow(a, 1.0 - theta) * std::pow(b, theta);
  r.holds = r.lhs <= r.rhs * (1.0 + 1e-10);
  return r;
}

}  // namespace hallmhd
