#include "hallmhd/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hallmhd/errors.hpp"

namespace hallmhd {

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (&a != &b) throw ShapeError(std::string(what) + ": fields live on different grids");
}

SpectralScalar::SpectralScalar(GridPtr grid) : grid_(std::move(grid)), c_(grid_->spec_size()) {}

SpectralScalar& SpectralScalar::operator+=(const SpectralScalar& o) {
  require_same_grid(grid(), o.grid(), "scalar +=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralScalar& SpectralScalar::operator-=(const SpectralScalar& o) {
  require_same_grid(grid(), o.grid(), "scalar -=");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralScalar& SpectralScalar::operator*=(double a) {
  for (auto& c : c_) c *= a;
  return *this;
}

SpectralVector::SpectralVector(GridPtr grid, bool divfree) : grid_(std::move(grid)), divfree_(divfree) {
  for (auto& c : c_) c.assign(grid_->spec_size(), Complex{});
}

SpectralVector& SpectralVector::operator+=(const SpectralVector& o) {
  return axpy(1.0, o);
}

SpectralVector& SpectralVector::operator-=(const SpectralVector& o) {
  return axpy(-1.0, o);
}

SpectralVector& SpectralVector::operator*=(double a) {
  for (auto& comp : c_)
    for (auto& c : comp) c *= a;
  return *this;
}

SpectralVector& SpectralVector::axpy(double a, const SpectralVector& x) {
  require_same_grid(grid(), x.grid(), "vector axpy");
  for (int c = 0; c < 3; ++c) {
    auto* dst = c_[c].data();
    const auto* src = x.c_[c].data();
    for (std::size_t i = 0; i < c_[c].size(); ++i) dst[i] += a * src[i];
  }
  divfree_ = divfree_ && x.divfree_;
  return *this;
}

void SpectralVector::set_zero() {
  for (auto& comp : c_) std::fill(comp.begin(), comp.end(), Complex{});
}

SpectralVector operator+(SpectralVector a, const SpectralVector& b) { return std::move(a += b); }
SpectralVector operator-(SpectralVector a, const SpectralVector& b) { return std::move(a -= b); }
SpectralVector operator*(double s, SpectralVector a) { return std::move(a *= s); }
SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b) { return std::move(a += b); }
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b) { return std::move(a -= b); }
SpectralScalar operator*(double s, SpectralScalar a) { return std::move(a *= s); }

PhysicalScalar::PhysicalScalar(GridPtr grid) : grid_(std::move(grid)), v_(grid_->real_size()) {}

PhysicalVector::PhysicalVector(GridPtr grid) : grid_(std::move(grid)) {
  for (auto& c : v_) c.assign(grid_->real_size(), 0.0);
}

double PhysicalVector::max_magnitude() const {
  double m2 = 0.0;
  for (std::size_t i = 0; i < v_[0].size(); ++i) {
    const double s = v_[0][i] * v_[0][i] + v_[1][i] * v_[1][i] + v_[2][i] * v_[2][i];
    // NaN compares false; propagate it explicitly.
    if (!(s <= m2)) m2 = std::isnan(s) ? s : std::max(m2, s);
    if (std::isnan(m2)) break;
  }
  return std::sqrt(m2);
}

PhysicalScalar to_physical(const SpectralScalar& f) {
  PhysicalScalar out(f.grid_ptr());
  f.grid().inverse(f.data(), out.data());
  return out;
}

PhysicalVector to_physical(const SpectralVector& f) {
  PhysicalVector out(f.grid_ptr());
  for (int c = 0; c < 3; ++c) f.grid().inverse(f[c], out[c]);
  return out;
}

SpectralScalar to_spectral(const PhysicalScalar& f) {
  SpectralScalar out(f.grid_ptr());
  f.grid().forward(f.data(), out.data());
  return out;
}

SpectralVector to_spectral(const PhysicalVector& f) {
  SpectralVector out(f.grid_ptr());
  for (int c = 0; c < 3; ++c) f.grid().forward(f[c], out[c]);
  return out;
}

namespace {
void apply_mask(const Grid& g, std::span<Complex> c) {
  const auto mask = g.mask();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!mask[i]) c[i] = Complex{};
}
}  // namespace

SpectralScalar product_to_spectral(const PhysicalScalar& f) {
  auto out = to_spectral(f);
  apply_mask(out.grid(), out.data());
  return out;
}

SpectralVector product_to_spectral(const PhysicalVector& f) {
  auto out = to_spectral(f);
  for (int c = 0; c < 3; ++c) apply_mask(out.grid(), out[c]);
  return out;
}

namespace {

// Index of -k for a coefficient on a self-conjugate plane, else -1.
std::ptrdiff_t conjugate_partner(const Grid& g, std::size_t idx) {
  const auto [a, b, c] = g.lattice(idx);
  const int n = g.n();
  auto neg = [n](int k) { return k == -n / 2 ? k : -k; };
  if (g.dim() == 3) {
    if (c != 0 && c != n / 2) return -1;
    return g.index_of(neg(a), neg(b), c);
  }
  if (b != 0 && b != n / 2) return -1;
  return g.index_of(neg(a), b, 0);
}

}  // namespace

void enforce_hermitian(const Grid& grid, std::span<Complex> c) {
  if (c.size() != grid.spec_size()) throw ShapeError("enforce_hermitian: size mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto p = conjugate_partner(grid, i);
    if (p < 0 || std::size_t(p) < i) continue;
    if (std::size_t(p) == i) {
      c[i] = Complex(c[i].real(), 0.0);
      continue;
    }
    const Complex avg = 0.5 * (c[i] + std::conj(c[p]));
    c[i] = avg;
    c[p] = std::conj(avg);
  }
}

void enforce_hermitian(SpectralVector& f) {
  for (int c = 0; c < 3; ++c) enforce_hermitian(f.grid(), f[c]);
}

double hermitian_defect(const Grid& grid, std::span<const Complex> c) {
  double m = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const auto p = conjugate_partner(grid, i);
    if (p >= 0) m = std::max(m, std::abs(c[i] - std::conj(c[p])));
  }
  return m;
}

void transform(const Grid& grid, Direction dir, std::span<double> phys, std::span<Complex> spec) {
  if (dir == Direction::Forward) {
    grid.forward(phys, spec);
  } else {
    grid.inverse(spec, phys);
  }
}

}  // namespace hallmhd
