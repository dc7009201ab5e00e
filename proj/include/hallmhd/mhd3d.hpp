#pragma once

#include <optional>

#include "hallmhd/field.hpp"

namespace hallmhd {

struct PhysicalParams {
  double mu = 1.0;
  double nu = 1.0;
  double eps = 0.0;

  /// mu, nu > 0 and eps >= 0; ConfigError otherwise.
  void validate() const;
};

enum class Formulation { Physical, Extended };

/// u, B and, in the extended formulation, v = u - eps curl B evolved on its
/// own. The same type serves 3D grids and 2.5D (2D lattice) grids.
struct State {
  double t = 0.0;
  SpectralVector u;
  SpectralVector b;
  std::optional<SpectralVector> v;

  State(SpectralVector u_, SpectralVector b_, std::optional<SpectralVector> v_ = std::nullopt, double t_ = 0.0);

  Formulation formulation() const { return v ? Formulation::Extended : Formulation::Physical; }
  const GridPtr& grid_ptr() const { return u.grid_ptr(); }
  const Grid& grid() const { return u.grid(); }
};

struct Rhs {
  SpectralVector du;
  SpectralVector db;
  std::optional<SpectralVector> dv;
};

/// du = P(curl B x B - u.grad u) + mu lap u, dB = curl((u - eps J) x B) + nu lap B.
Rhs rhs_physical(const State& s, const PhysicalParams& p);

/// eps curl(dealias(curl B x B)).
SpectralVector hall_term(const SpectralVector& b, double eps);

/// Extended system. Uses the rearrangement
///   -eps curl(curl v x B) + curl(v x u) + 2 eps curl(v.grad B)
///     = curl(v x (u - eps J)) - eps curl curl(v x B)
/// which needs 24 transforms. Requires mu = nu.
Rhs rhs_extended(const State& s, const PhysicalParams& p);
/// Term-by-term evaluation of the same right-hand side (slow; reference).
Rhs rhs_extended_terms(const State& s, const PhysicalParams& p);

/// Dispatches on the state's formulation.
Rhs rhs(const State& s, const PhysicalParams& p);

struct StepControl {
  double dt = 1e-3;
  double t_end = 1.0;
  /// Safety factor of the explicit stability guard.
  double hall_cfl = 0.25;
};

/// Largest stable step: c_h / (eps max|B| kmax^2) for the Hall term and
/// c_h / (kmax (max|u| + max|B|)) for advection (|v| also counts in the
/// extended formulation). Infinity for the zero state.
double stable_dt(const State& s, const PhysicalParams& p, double hall_cfl);

/// One integrating-factor Heun step. Throws CflError when dt exceeds
/// stable_dt, NumericError on non-finite values.
State step(const State& s, const PhysicalParams& p, const StepControl& c);

/// Advances to `t_end` with fixed dt; the last step is shortened to land on t_end.
State advance(State s, const PhysicalParams& p, const StepControl& c, double t_end);

/// |v - (u - eps curl B)|_L2
double redundancy_drift(const State& s, double eps);

/// Largest |k.f(k)| over u, B and v.
double state_divergence(const State& s);

/// S_lambda f(x) = lambda f(lambda x) on the spectral side.
SpectralVector scale_field(const SpectralVector& f, int lambda);

struct ScalingResiduals {
  /// eps = 0: rhs(S u, S B) against lambda^2 S rhs(u, B).
  double mhd = 0.0;
  /// Full system with eps replaced by eps / lambda on the scaled side.
  double hall_rescaled = 0.0;
  /// Hall term with J passed in as an independent field scaled like u.
  double hall_triple = 0.0;
};

/// Relative residuals of the scaling relations. Data must satisfy
/// 2 lambda max|k_i| <= K so neither side loses modes to the mask.
ScalingResiduals scaling_covariance_check(const SpectralVector& u, const SpectralVector& b,
                                          const PhysicalParams& p, int lambda);

}  // namespace hallmhd
