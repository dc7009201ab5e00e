#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "hallmhd/mhd3d.hpp"

namespace hallmhd {

/// Terms of the Lambda^s energy budget of the extended system:
///   1/2 d/dt |u|_s^2 + mu |u|_{s+1}^2 = a1 + a2
///   1/2 d/dt |B|_s^2 + mu |B|_{s+1}^2 = a3
///   1/2 d/dt |v|_s^2 + mu |v|_{s+1}^2 = a4 + ... + a8
/// with |.|_s the homogeneous norm. At s = 1/2 these are the critical
/// terms, at s = 1 the propagation terms.
struct BudgetTerms {
  double s = 0.5;
  std::array<double, 8> a{};
  double yu = 0.0, yb = 0.0, yv = 0.0;  // |.|_s^2
  double du = 0.0, db = 0.0, dv = 0.0;  // |.|_{s+1}^2
};

/// ConfigError without v.
BudgetTerms budget_terms(const State& s, const PhysicalParams& p, double order);

struct BudgetResidual {
  double u = 0.0, b = 0.0, v = 0.0;
  double max() const;
};

/// Difference quotient across the pair against the endpoint average of the
/// right-hand sides, relative to the size of the terms involved.
BudgetResidual budget_residual(const BudgetTerms& before, const BudgetTerms& after, double h,
                               const PhysicalParams& p);

/// Smallest C with d/dt Y + mu D <= C sqrt(Y) D over the pair, Y the summed
/// |.|_{1/2}^2 and D the summed |.|_{3/2}^2 (0 if the left side is <= 0).
double fitted_critical_constant(const BudgetTerms& before, const BudgetTerms& after, double h,
                                const PhysicalParams& p);

/// (curl((curl v) x B) | v), product taken on the grid without truncation,
/// relative to |(curl v) x B| |curl v|.
double cancellation_check(const SpectralVector& v, const SpectralVector& b);
/// |(curl w | v) - (w | curl v)| relative to |curl w||v| + |w||curl v|.
double adjointness_check(const SpectralVector& w, const SpectralVector& v);

struct EnergySample {
  double t = 0.0;
  double u2 = 0.0, b2 = 0.0;    // |u|^2, |B|^2
  double gu2 = 0.0, gb2 = 0.0;  // |grad u|^2, |grad B|^2
};

EnergySample energy_sample(const State& s);

/// drift(t_i) = |E(t_i) + int_0^t_i (mu|grad u|^2 + nu|grad B|^2) - E(0)| / E(0)
/// with E = (|u|^2 + |B|^2)/2 and the integral by the trapezoid rule.
/// Zero data give zero drift.
std::vector<double> energy_budget(const std::vector<EnergySample>& samples, const PhysicalParams& p);

struct MonotonicityResult {
  bool nonincreasing = true;
  /// largest Y(t_{i+1}) - Y(t_i), relative to Y(0); 0 when Y never rises
  double max_uptick = 0.0;
  /// Y(t) + (mu/2) int_t0^t D <= Y(t0) for every sample pair
  bool integrated_holds = true;
  double max_integrated_excess = 0.0;
};

/// Y: |u|^2 + |B|^2 + |u - eps J|^2 in Hdot^{1/2}; D: same in Hdot^{3/2}.
/// Upticks up to tol * Y(0) are accepted.
MonotonicityResult monotonicity_monitor(const std::vector<double>& t, const std::vector<double>& y,
                                        const std::vector<double>& d, double mu, double tol = 1e-8);
/// Same, with int_0^t D supplied at each sample (e.g. accumulated per step).
MonotonicityResult monotonicity_from_integral(const std::vector<double>& y, const std::vector<double>& int_d,
                                              double mu, double tol = 1e-8);

struct DecayResult {
  /// least-squares slope of -log Y
  double rate = 0.0;
  double final_ratio = 0.0;
  std::vector<double> checkpoints;
  bool below = true;
};

/// `fraction`: the final value must not exceed fraction * Y(0).
/// `checkpoints` evenly spaced samples are reported.
DecayResult decay_monitor(const std::vector<double>& t, const std::vector<double>& y, double fraction,
                          int checkpoints = 5);

struct TwinRunDelta {
  double t = 0.0;
  double du = 0.0, db = 0.0, dv = 0.0;        // L2 norms of the differences
  double int_gdu = 0.0, int_gdb = 0.0;        // int |grad du|^2, int |grad dB|^2
  double weight = 0.0;                        // |(u, B, J)|_{H1}^4 of the first run
  double gronwall_rhs = 0.0;                  // (1 + eps^4)/min(mu,nu)^3 int |(dB,du)|^2 weight
};

struct WeakStrongReport {
  std::vector<TwinRunDelta> deltas;
  /// smallest C with |d(t)|^2 + mu int|grad du|^2 + nu int|grad dB|^2 - |d(0)|^2 <= C rhs(t)
  double c_fit = 0.0;
  double max_delta = 0.0;
  /// sup |d(t)|^2 <= |d(0)|^2 exp(C (1+eps^4)/min^3 int weight) with C = c_fit
  bool bound_holds = true;
};

/// Both runs sampled at the same times on the same grid; run `a` is the
/// strong solution. Throws ShapeError/ArgumentError on mismatches.
WeakStrongReport weakstrong_monitor(const std::vector<State>& a, const std::vector<State>& b,
                                    const PhysicalParams& p);

/// One row of timeseries.csv.
struct DiagnosticsRecord {
  double t = 0.0;
  double u_l2 = 0.0, b_l2 = 0.0;
  double u_h12 = 0.0, b_h12 = 0.0, v_h12 = 0.0;
  double u_h32 = 0.0, b_h32 = 0.0, v_h32 = 0.0;
  double diss_u = 0.0, diss_b = 0.0;  // int mu|grad u|^2, int nu|grad B|^2
  double energy_drift = 0.0;
  double triple = 0.0;  // Y
  std::array<double, 8> a{};
  double res_u = 0.0, res_b = 0.0, res_v = 0.0;  // s = 1/2 budget residuals
  std::array<double, 8> e{};
  double eres_u = 0.0, eres_b = 0.0, eres_v = 0.0;  // s = 1 budget residuals
  double c_critical = 0.0;
  double cancellation = 0.0;
  double vt = 0.0;  // V(t)
  double wt = 0.0;  // W(t)
  double e_residual = 0.0;
  double v_drift = 0.0;
};

/// Frozen column order; see the README.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const DiagnosticsRecord& r);
void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const DiagnosticsRecord& r);
/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// |(u, B, v)|_{H1}^4 + |v|_{H3/2}^2 for a single solution.
double v_quantity(const SpectralVector& u, const SpectralVector& b, const SpectralVector& v);

}  // namespace hallmhd
