#include "hallmhd/operators.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

constexpr Complex I{0.0, 1.0};

double mean_tolerance(double norm) { return 1e-12 * std::max(norm, 1e-300); }

bool has_mean(const SpectralVector& f) {
  const double m = std::abs(f[0][0]) + std::abs(f[1][0]) + std::abs(f[2][0]);
  return m > mean_tolerance(l2_norm(f)) && m > 0.0;
}

template <class Sym>
SpectralScalar scalar_multiplier(const SpectralScalar& f, Sym&& sym) {
  SpectralScalar out(f.grid_ptr());
  for (std::size_t i = 0; i < f.grid().spec_size(); ++i) out[i] = sym(i) * f[i];
  return out;
}

}  // namespace

void require_mean_free(const SpectralVector& f, const char* what) {
  if (has_mean(f)) throw DomainError(std::string(what) + ": field has a nonzero mean mode");
}

void zero_mean(SpectralVector& f) {
  for (int c = 0; c < 3; ++c) f[c][0] = Complex{};
}

SpectralVector apply_lambda(const SpectralVector& f, double s) {
  if (s == 0.0) return f;
  if (s < 0.0) require_mean_free(f, "apply_lambda");
  const auto& g = f.grid();
  const auto k2 = g.k2();
  SpectralVector out(f.grid_ptr(), f.is_divfree());
  for (std::size_t i = 1; i < g.spec_size(); ++i) {
    const double m = std::pow(k2[i], 0.5 * s);
    for (int c = 0; c < 3; ++c) out[c][i] = m * f[c][i];
  }
  return out;
}

SpectralScalar apply_lambda(const SpectralScalar& f, double s) {
  if (s == 0.0) return f;
  if (s < 0.0 && std::abs(f[0]) > mean_tolerance(l2_norm(f))) {
    throw DomainError("apply_lambda: field has a nonzero mean mode");
  }
  const auto k2 = f.grid().k2();
  return scalar_multiplier(f, [&](std::size_t i) { return i == 0 ? 0.0 : std::pow(k2[i], 0.5 * s); });
}

SpectralVector curl(const SpectralVector& f) {
  const auto& g = f.grid();
  SpectralVector out(f.grid_ptr(), true);
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    const Complex a = f[0][i], b = f[1][i], c = f[2][i];
    out[0][i] = I * (k[1] * c - k[2] * b);
    out[1][i] = I * (k[2] * a - k[0] * c);
    out[2][i] = I * (k[0] * b - k[1] * a);
  }
  return out;
}

SpectralVector curl3(const SpectralVector& f) {
  if (f.grid().dim() != 3) throw ShapeError("curl3 needs a 3D grid");
  return curl(f);
}

SpectralVector curl2(const SpectralVector& f) {
  if (f.grid().dim() != 2) throw ShapeError("curl2 needs a 2D grid");
  return curl(f);
}

SpectralVector leray_project(const SpectralVector& f) {
  const auto& g = f.grid();
  SpectralVector out(f.grid_ptr(), true);
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) {
      for (int c = 0; c < 3; ++c) out[c][i] = f[c][i];
      continue;
    }
    const Complex kf = (k[0] * f[0][i] + k[1] * f[1][i] + k[2] * f[2][i]) / kk;
    for (int c = 0; c < 3; ++c) out[c][i] = f[c][i] - k[c] * kf;
  }
  return out;
}

SpectralVector curl_inverse(const SpectralVector& j) {
  require_mean_free(j, "curl_inverse");
  const auto& g = j.grid();
  SpectralVector out(j.grid_ptr(), true);
  for (std::size_t i = 1; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) continue;
    const Complex a = j[0][i], b = j[1][i], c = j[2][i];
    out[0][i] = I * (k[1] * c - k[2] * b) / kk;
    out[1][i] = I * (k[2] * a - k[0] * c) / kk;
    out[2][i] = I * (k[0] * b - k[1] * a) / kk;
  }
  return out;
}

SpectralVector band_filter(const SpectralVector& f, double lo, double hi) {
  if (!(lo >= 0.0) || !(lo <= hi)) throw ArgumentError("band_filter: need 0 <= lo <= hi");
  const auto& g = f.grid();
  const auto k2 = g.k2();
  SpectralVector out(f.grid_ptr(), f.is_divfree());
  // Compare |k| itself so that bounds produced by next_shell are exact.
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const double k = std::sqrt(k2[i]);
    if (k < lo || k > hi) continue;
    for (int c = 0; c < 3; ++c) out[c][i] = f[c][i];
  }
  return out;
}

SpectralScalar band_filter(const SpectralScalar& f, double lo, double hi) {
  if (!(lo >= 0.0) || !(lo <= hi)) throw ArgumentError("band_filter: need 0 <= lo <= hi");
  const auto k2 = f.grid().k2();
  return scalar_multiplier(f, [&](std::size_t i) {
    const double k = std::sqrt(k2[i]);
    return (k < lo || k > hi) ? 0.0 : 1.0;
  });
}

double next_shell(const Grid& grid, double rho) {
  // Shells are square roots of integers; compare squared values exactly.
  double best = std::numeric_limits<double>::infinity();
  const double r2 = rho * rho;
  for (double q : grid.k2())
    if (q > r2 && q < best) best = q;
  return std::sqrt(best);
}

SpectralVector dealias(const SpectralVector& f) {
  SpectralVector out = f;
  const auto mask = f.grid().mask();
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (!mask[i]) out[c][i] = Complex{};
  return out;
}

SpectralScalar dealias(const SpectralScalar& f) {
  const auto mask = f.grid().mask();
  return scalar_multiplier(f, [&](std::size_t i) { return mask[i] ? 1.0 : 0.0; });
}

SpectralScalar divergence(const SpectralVector& f) {
  const auto& g = f.grid();
  SpectralScalar out(f.grid_ptr());
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    out[i] = I * (k[0] * f[0][i] + k[1] * f[1][i] + k[2] * f[2][i]);
  }
  return out;
}

SpectralVector gradient(const SpectralScalar& f) {
  const auto& g = f.grid();
  SpectralVector out(f.grid_ptr());
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    for (int c = 0; c < 3; ++c) out[c][i] = I * k[c] * f[i];
  }
  return out;
}

SpectralVector laplacian(const SpectralVector& f) {
  const auto k2 = f.grid().k2();
  SpectralVector out(f.grid_ptr(), f.is_divfree());
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < k2.size(); ++i) out[c][i] = -k2[i] * f[c][i];
  return out;
}

SpectralScalar laplacian(const SpectralScalar& f) {
  const auto k2 = f.grid().k2();
  return scalar_multiplier(f, [&](std::size_t i) { return -k2[i]; });
}

SpectralVector partial(const SpectralVector& f, int axis) {
  if (axis < 0 || axis > 2) throw ArgumentError("partial: axis out of range");
  const auto& g = f.grid();
  SpectralVector out(f.grid_ptr(), f.is_divfree());
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const Complex m = I * g.dk(i)[axis];
    for (int c = 0; c < 3; ++c) out[c][i] = m * f[c][i];
  }
  return out;
}

double inner(const SpectralScalar& a, const SpectralScalar& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  const auto w = a.grid().weight();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
  return s;
}

double inner(const SpectralVector& a, const SpectralVector& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  const auto w = a.grid().weight();
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto x = a[c], y = b[c];
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
  }
  return s;
}

double l2_norm(const SpectralVector& f) { return std::sqrt(std::max(0.0, inner(f, f))); }
double l2_norm(const SpectralScalar& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

double max_divergence(const SpectralVector& f) {
  const auto& g = f.grid();
  double m = 0.0;
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.k(i);
    m = std::max(m, std::abs(k[0] * f[0][i] + k[1] * f[1][i] + k[2] * f[2][i]));
  }
  return m;
}

PhysicalVector cross(const PhysicalVector& a, const PhysicalVector& b) {
  require_same_grid(a.grid(), b.grid(), "cross");
  PhysicalVector out(a.grid_ptr());
  const std::size_t n = a.grid().real_size();
  for (std::size_t i = 0; i < n; ++i) {
    out[0][i] = a[1][i] * b[2][i] - a[2][i] * b[1][i];
    out[1][i] = a[2][i] * b[0][i] - a[0][i] * b[2][i];
    out[2][i] = a[0][i] * b[1][i] - a[1][i] * b[0][i];
  }
  return out;
}

PhysicalScalar dot(const PhysicalVector& a, const PhysicalVector& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  PhysicalScalar out(a.grid_ptr());
  for (std::size_t i = 0; i < a.grid().real_size(); ++i)
    out[i] = a[0][i] * b[0][i] + a[1][i] * b[1][i] + a[2][i] * b[2][i];
  return out;
}

PhysicalVector advect(const PhysicalVector& a, const SpectralVector& b) {
  require_same_grid(a.grid(), b.grid(), "advect");
  PhysicalVector out(a.grid_ptr());
  const int axes = a.grid().dim();
  const std::size_t n = a.grid().real_size();
  for (int j = 0; j < axes; ++j) {
    const auto db = to_physical(partial(b, j));
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n; ++i) out[c][i] += a[j][i] * db[c][i];
  }
  return out;
}

double grid_inner(const PhysicalVector& a, const PhysicalVector& b) {
  require_same_grid(a.grid(), b.grid(), "grid_inner");
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid().real_size(); ++i) s += a[c][i] * b[c][i];
  return s / double(a.grid().real_size());
}

SpectralVector cross_product(const SpectralVector& a, const SpectralVector& b) {
  return product_to_spectral(cross(to_physical(a), to_physical(b)));
}

SpectralVector advective(const SpectralVector& a, const SpectralVector& b) {
  return product_to_spectral(advect(to_physical(a), b));
}

SpectralVector div_tensor(const SpectralVector& a, const SpectralVector& b) {
  const auto pa = to_physical(a);
  const auto pb = to_physical(b);
  const auto& g = a.grid();
  const std::size_t n = g.real_size();
  SpectralVector out(a.grid_ptr());
  PhysicalScalar prod(a.grid_ptr());
  for (int j = 0; j < g.dim(); ++j) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t i = 0; i < n; ++i) prod[i] = pa[j][i] * pb[c][i];
      const auto ph = product_to_spectral(prod);
      for (std::size_t i = 0; i < g.spec_size(); ++i) out[c][i] += I * g.dk(i)[j] * ph[i];
    }
  }
  return out;
}

SpectralScalar recover_pressure(const SpectralVector& u, const SpectralVector& b) {
  auto f = advective(u, u);
  f -= advective(b, b);
  const auto d = divergence(f);
  const auto k2 = u.grid().k2();
  SpectralScalar out(u.grid_ptr());
  for (std::size_t i = 1; i < k2.size(); ++i) out[i] = d[i] / k2[i];
  return out;
}

}  // namespace hallmhd
