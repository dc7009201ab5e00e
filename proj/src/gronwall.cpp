#include "hallmhd/gronwall.hpp"

#include <cmath>
#include <limits>

#include "hallmhd/errors.hpp"

namespace hallmhd {

GronwallResult gronwall_verify(const GronwallTrace& tr) {
  const std::size_t n = tr.t.size();
  if (n == 0) throw ArgumentError("gronwall_verify: empty trace");
  if (tr.x.size() != n || tr.d.size() != n || tr.w.size() != n) {
    throw ArgumentError("gronwall_verify: trace columns differ in length");
  }
  if (!(tr.c >= 0.0) || !(tr.alpha >= 0.0)) throw ArgumentError("gronwall_verify: need C, alpha >= 0");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(tr.t[i]) || !std::isfinite(tr.x[i]) || !std::isfinite(tr.d[i]) || !std::isfinite(tr.w[i])) {
      throw ArgumentError("gronwall_verify: non-finite sample");
    }
    if (tr.x[i] < 0.0 || tr.d[i] < 0.0 || tr.w[i] < 0.0) throw ArgumentError("gronwall_verify: negative sample");
    if (i > 0 && !(tr.t[i] > tr.t[i - 1])) throw ArgumentError("gronwall_verify: times not increasing");
  }

  GronwallResult r;
  const double x0sq = tr.x[0] * tr.x[0];
  double int_w = 0.0, int_d2 = 0.0;
  r.bound_holds = true;
  r.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < n; ++i) {
    const double h = tr.t[i] - tr.t[i - 1];
    int_w += 0.5 * h * (tr.w[i] + tr.w[i - 1]);
    int_d2 += 0.5 * h * (tr.d[i] * tr.d[i] + tr.d[i - 1] * tr.d[i - 1]);
    const double lhs = tr.x[i] * tr.x[i] + 0.5 * int_d2;
    const double rhs = x0sq * std::exp(tr.c * int_w);
    r.margin = std::min(r.margin, rhs - lhs);
    if (lhs > rhs) r.bound_holds = false;
  }
  if (n == 1) r.margin = 0.0;
  r.smallness = 2.0 * tr.c * std::pow(tr.x[0], tr.alpha) * std::exp(0.5 * tr.c * tr.alpha * int_w) < 1.0;
  r.bound_asserted = r.smallness;
  return r;
}

}  // namespace hallmhd
