#pragma once

#include <vector>

#include "hallmhd/mhd3d.hpp"

namespace hallmhd {

/// Fields of three components over two variables with the derived fields
/// j = curl~ B, omega = curl~ u and E = eps omega + B kept alongside.
class State25D {
 public:
  State25D(State s, double eps);

  const State& state() const { return s_; }
  double t() const { return s_.t; }
  double eps() const { return eps_; }
  const SpectralVector& u() const { return s_.u; }
  const SpectralVector& b() const { return s_.b; }
  const SpectralVector& j() const { return j_; }
  const SpectralVector& omega() const { return omega_; }
  const SpectralVector& e() const { return e_; }

  /// Largest relative mismatch between the cache and fresh j, omega, E.
  double cache_defect() const;

 private:
  State s_;
  double eps_;
  SpectralVector j_, omega_, e_;
};

/// du = P2(B~.grad~ B - u~.grad~ u) + mu lap~ u
/// dB = -u~.grad~ B - eps B~.grad~ j + eps j~.grad~ B + nu lap~ B + B~.grad~ u
/// evaluated with advective products as written.
Rhs rhs_25d(const State25D& s, const PhysicalParams& p);

/// Steps with the shared integrator and refreshes the cache.
State25D step_25d(const State25D& s, const PhysicalParams& p, const StepControl& c);

/// dB from the rewritten form
///   -u~.grad~ B + B~.grad~ u + eps (lap~ B x B + 2 j~.grad~ B - grad~(j.B)) + nu lap~ B.
SpectralVector rewritten_b_rhs(const State25D& s, const PhysicalParams& p);

/// |(E1 - E0)/dt - avg(E~.grad~ u - u~.grad~ E + mu lap~ E)| / |E|, endpoint
/// average in time. mu = nu required; 0 for the zero state.
double e_residual(const State25D& before, const State25D& after, const PhysicalParams& p, double dt);

struct IdentityReport {
  /// curl~(y x z) = z~.grad~ y - y~.grad~ z
  double i1 = 0.0;
  bool i1_skipped = false;
  /// (a x b).c = (c x a).b = (b x c).a, pointwise
  double triple = 0.0;
  /// curl~ curl~ y + lap~ y = 0
  double double_curl = 0.0;
};

/// Relative residuals of the vector identities. The first one needs
/// divergence-free y and z and is skipped (flagged) otherwise.
IdentityReport identity_suite(const SpectralVector& y, const SpectralVector& z, const SpectralVector& a,
                              const SpectralVector& b, const SpectralVector& c);

/// |u|^2 |grad~ u|^2 + |grad~ u| |grad~^2 u|
double w_quantity(const SpectralVector& u);

/// Scalars sampled along a 2.5D run.
struct Sample25D {
  double t = 0.0;
  double u2 = 0.0, b2 = 0.0, v2 = 0.0;     // squared L2 norms
  double gu2 = 0.0, gb2 = 0.0, gv2 = 0.0;  // squared gradient norms
  double lapb2 = 0.0;                      // |lap~ B|^2
  double w = 0.0;
  double om2 = 0.0, gom2 = 0.0;  // |omega|^2, |grad~ omega|^2
  double e2 = 0.0;
};

Sample25D sample_25d(const State25D& s);

struct Fitted25D {
  /// d/dt|v|^2 + mu|grad~ v|^2 <= C |(u,B,v)|^2 |grad~(u,B,v)|^2
  double c_v = 0.0;
  /// d/dt|B|_H1^2 + nu|grad~ B|_H1^2 <= C (W |B|_H1^2 + |grad~ B| |lap~ B|^2)
  double c_h1 = 0.0;
  /// smallest C with |omega|^2 + mu int|grad~ omega|^2 <= 2|(omega0,B0)|^2 (1 + exp(C |(u0,B0)|^4))
  double c_omega = 0.0;
  /// max over samples of the energy-balance drift
  double energy_drift = 0.0;
};

/// Time derivatives by differences between consecutive samples, other
/// factors at the interval midpoint (average of the endpoints).
Fitted25D fit_constants_25d(const std::vector<Sample25D>& samples, const PhysicalParams& p);

}  // namespace hallmhd
