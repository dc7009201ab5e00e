#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

// Linear Fourier multipliers. All of them leave the input untouched.

/// |k|^s per mode. s < 0 requires a mean-free input.
SpectralVector apply_lambda(const SpectralVector& f, double s);
SpectralScalar apply_lambda(const SpectralScalar& f, double s);

/// ik x f. On a 2D lattice this is the 2.5D curl (d2 f3, -d1 f3, d1 f2 - d2 f1).
SpectralVector curl(const SpectralVector& f);
/// curl restricted to 3D grids.
SpectralVector curl3(const SpectralVector& f);
/// curl restricted to 2D grids (2.5D fields).
SpectralVector curl2(const SpectralVector& f);

/// I - k k^T / |k|^2. With k3 = 0 it acts on components 1 and 2 only.
SpectralVector leray_project(const SpectralVector& f);

/// ik x J / |k|^2. J must be mean free; for divergence-free B it inverts curl.
SpectralVector curl_inverse(const SpectralVector& j);

/// Keeps lo <= |k| <= hi. hi may be +infinity.
SpectralVector band_filter(const SpectralVector& f, double lo, double hi);
SpectralScalar band_filter(const SpectralScalar& f, double lo, double hi);
/// Smallest lattice |k| strictly above rho; +infinity if none.
double next_shell(const Grid& grid, double rho);

/// Zeroes modes outside the two-thirds mask.
SpectralVector dealias(const SpectralVector& f);
SpectralScalar dealias(const SpectralScalar& f);

SpectralScalar divergence(const SpectralVector& f);
SpectralVector gradient(const SpectralScalar& f);
SpectralVector laplacian(const SpectralVector& f);
SpectralScalar laplacian(const SpectralScalar& f);
/// d/dx_axis of each component.
SpectralVector partial(const SpectralVector& f, int axis);

/// Spectral inner product, equal to the grid mean of a.b.
double inner(const SpectralVector& a, const SpectralVector& b);
double inner(const SpectralScalar& a, const SpectralScalar& b);
double l2_norm(const SpectralVector& f);
double l2_norm(const SpectralScalar& f);
/// Largest |k.f(k)| over modes (3D) or |k~.f~(k)| (2.5D).
double max_divergence(const SpectralVector& f);

/// Throws DomainError when the k = 0 coefficient is not negligible.
void require_mean_free(const SpectralVector& f, const char* what);
void zero_mean(SpectralVector& f);

// Pointwise algebra on physical fields.
PhysicalVector cross(const PhysicalVector& a, const PhysicalVector& b);
PhysicalScalar dot(const PhysicalVector& a, const PhysicalVector& b);
/// Physical-space (a.grad) b with b given spectrally; no dealiasing.
PhysicalVector advect(const PhysicalVector& a, const SpectralVector& b);
/// Grid mean of a.b (no spectral truncation involved).
double grid_inner(const PhysicalVector& a, const PhysicalVector& b);

// Dealiased quadratic products, returned spectrally.
SpectralVector cross_product(const SpectralVector& a, const SpectralVector& b);
/// (a.grad) b
SpectralVector advective(const SpectralVector& a, const SpectralVector& b);
/// Component-wise div(a (x) b), i.e. d_j (a_j b_i). Equals (a.grad) b when div a = 0.
SpectralVector div_tensor(const SpectralVector& a, const SpectralVector& b);

/// Pressure solving -lap(pi) = div(u.grad u - B.grad B), mean free.
SpectralScalar recover_pressure(const SpectralVector& u, const SpectralVector& b);

}  // namespace hallmhd
