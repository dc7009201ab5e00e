#pragma once

#include <vector>

namespace hallmhd {

/// Sampled trace for d/dt X^2 + D^2 <= C W X^2 + C X^alpha D^2.
struct GronwallTrace {
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> d;
  std::vector<double> w;
  double c = 0.0;
  double alpha = 0.0;
};

struct GronwallResult {
  /// 2 C X(0)^alpha exp((C alpha / 2) int W) < 1
  bool smallness = false;
  /// X^2(t) + (1/2) int_0^t D^2 <= X^2(0) exp(C int_0^t W) at every sample.
  bool bound_holds = false;
  /// The bound is only a conclusion when the smallness condition holds.
  bool bound_asserted = false;
  /// min over samples after the first of RHS - LHS (RHS - LHS at t0 is 0).
  double margin = 0.0;
};

/// Integrals by the trapezoid rule. Throws ArgumentError on an empty or
/// malformed trace.
GronwallResult gronwall_verify(const GronwallTrace& trace);

}  // namespace hallmhd
