#pragma once

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Homogeneous Sobolev norm, sum over k != 0 of |k|^2s |f(k)|^2 over all
/// components. s = 0 is the plain L2 norm (mean included). s < 0 needs a
/// mean-free field.
double hs_norm(const SpectralVector& f, double s);
double hs_norm(const SpectralScalar& f, double s);
/// (Lambda^s a | Lambda^s b)
double hs_inner(const SpectralVector& a, const SpectralVector& b, double s);
/// Inhomogeneous norm with weight (1 + |k|^2)^s.
double h_norm(const SpectralVector& f, double s);

/// Copies coefficients onto a finer grid of the same dimension. Nyquist
/// planes of the coarse grid are dropped.
SpectralScalar pad(const SpectralScalar& f, const GridPtr& fine);
SpectralVector pad(const SpectralVector& f, const GridPtr& fine);

/// Physical samples on a grid refined by `factor`.
PhysicalScalar oversample(const SpectralScalar& f, int factor = 2);

/// (mean |f|^p)^(1/p) by quadrature on the 2x grid; p = inf gives the max.
double lp_norm(const SpectralScalar& f, double p);
/// Pointwise Euclidean magnitude, otherwise as above.
double lp_norm(const SpectralVector& f, double p);
/// Quadrature of already sampled values, no refinement.
double lp_norm_samples(const PhysicalScalar& f, double p);

struct InterpolationResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// |f|_{H^s} <= |f|_{H^s0}^(1-theta) |f|_{H^s1}^theta, s = (1-theta) s0 + theta s1.
InterpolationResult interpolation_check(const SpectralVector& f, double s0, double s1, double theta);

}  // namespace hallmhd
