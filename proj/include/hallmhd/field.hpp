#pragma once

#include <array>
#include <span>

#include "hallmhd/grid.hpp"

namespace hallmhd {

/// One complex coefficient array on the half lattice.
class SpectralScalar {
 public:
  explicit SpectralScalar(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<Complex> data() { return c_; }
  std::span<const Complex> data() const { return c_; }
  Complex& operator[](std::size_t i) { return c_[i]; }
  const Complex& operator[](std::size_t i) const { return c_[i]; }

  SpectralScalar& operator+=(const SpectralScalar& o);
  SpectralScalar& operator-=(const SpectralScalar& o);
  SpectralScalar& operator*=(double a);

 private:
  GridPtr grid_;
  SpectralArray c_;
};

/// Three-component field stored as Fourier coefficients. On a 2D lattice the
/// three components depend on two variables (2.5D flows).
///
/// `is_divfree` records that the field was produced by an operation whose
/// range is divergence free (Leray projection, curl, curl inverse) or by a
/// linear combination of such fields.
class SpectralVector {
 public:
  explicit SpectralVector(GridPtr grid, bool divfree = false);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<Complex> operator[](int c) { return c_[c]; }
  std::span<const Complex> operator[](int c) const { return c_[c]; }

  bool is_divfree() const { return divfree_; }
  void set_divfree(bool v) { divfree_ = v; }

  SpectralVector& operator+=(const SpectralVector& o);
  SpectralVector& operator-=(const SpectralVector& o);
  SpectralVector& operator*=(double a);
  /// this += a * x
  SpectralVector& axpy(double a, const SpectralVector& x);

  void set_zero();

 private:
  GridPtr grid_;
  std::array<SpectralArray, 3> c_;
  bool divfree_;
};

SpectralVector operator+(SpectralVector a, const SpectralVector& b);
SpectralVector operator-(SpectralVector a, const SpectralVector& b);
SpectralVector operator*(double s, SpectralVector a);
SpectralScalar operator+(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator-(SpectralScalar a, const SpectralScalar& b);
SpectralScalar operator*(double s, SpectralScalar a);

class PhysicalScalar {
 public:
  explicit PhysicalScalar(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<double> data() { return v_; }
  std::span<const double> data() const { return v_; }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  GridPtr grid_;
  RealArray v_;
};

class PhysicalVector {
 public:
  explicit PhysicalVector(GridPtr grid);

  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<double> operator[](int c) { return v_[c]; }
  std::span<const double> operator[](int c) const { return v_[c]; }

  /// max over grid points of the Euclidean magnitude
  double max_magnitude() const;

 private:
  GridPtr grid_;
  std::array<RealArray, 3> v_;
};

enum class Direction { Forward, Inverse };

PhysicalScalar to_physical(const SpectralScalar& f);
PhysicalVector to_physical(const SpectralVector& f);
/// Plain forward transform; no mask is applied.
SpectralScalar to_spectral(const PhysicalScalar& f);
SpectralVector to_spectral(const PhysicalVector& f);

/// Forward transform of a quadratic product followed by the two-thirds mask
/// (which also zeroes the Nyquist planes).
SpectralScalar product_to_spectral(const PhysicalScalar& f);
SpectralVector product_to_spectral(const PhysicalVector& f);

/// Raw-array transform with an explicit direction; throws ShapeError when
/// the spans do not match the grid.
void transform(const Grid& grid, Direction dir, std::span<double> phys, std::span<Complex> spec);

/// Evaluates a function on the physical grid.
template <class F>
PhysicalScalar sample(const GridPtr& grid, F&& f) {
  PhysicalScalar out(grid);
  const int n = grid->n();
  std::size_t idx = 0;
  if (grid->dim() == 3) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) out[idx++] = f(grid->coord(i), grid->coord(j), grid->coord(l));
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[idx++] = f(grid->coord(i), grid->coord(j), 0.0);
  }
  return out;
}

template <class F0, class F1, class F2>
PhysicalVector sample(const GridPtr& grid, F0&& f0, F1&& f1, F2&& f2) {
  PhysicalVector out(grid);
  auto a = sample(grid, f0), b = sample(grid, f1), c = sample(grid, f2);
  std::copy(a.data().begin(), a.data().end(), out[0].begin());
  std::copy(b.data().begin(), b.data().end(), out[1].begin());
  std::copy(c.data().begin(), c.data().end(), out[2].begin());
  return out;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what);

/// Projects coefficients onto the Hermitian-symmetric subspace. Only the
/// self-conjugate planes of the half axis carry both k and -k.
void enforce_hermitian(const Grid& grid, std::span<Complex> c);
void enforce_hermitian(SpectralVector& f);
/// Largest |c(k) - conj c(-k)| over pairs stored twice.
double hermitian_defect(const Grid& grid, std::span<const Complex> c);

}  // namespace hallmhd
