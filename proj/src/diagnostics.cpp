#include "hallmhd/diagnostics.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/sobolev.hpp"

namespace hallmhd {

namespace {

double sq(double x) { return x * x; }

double rel_or_abs(double num, double scale) { return scale > 0.0 ? num / scale : num; }

}  // namespace

BudgetTerms budget_terms(const State& st, const PhysicalParams& p, double s) {
  if (!st.v) throw ConfigError("budget terms need the extended formulation (v)");
  const auto& u = st.u;
  const auto& b = st.b;
  const auto& v = *st.v;
  BudgetTerms r;
  r.s = s;
  const auto uu = div_tensor(u, u);
  const auto bb = div_tensor(b, b);
  const auto cv = curl(v);
  r.a[0] = -hs_inner(uu, u, s);
  r.a[1] = hs_inner(bb, u, s);
  r.a[2] = hs_inner(cross_product(v, b), curl(b), s);
  r.a[3] = -hs_inner(uu, v, s);
  r.a[4] = hs_inner(bb, v, s);
  if (p.eps != 0.0) {
    // the subtracted piece vanishes pointwise; kept so the term is the commutator
    const auto lcv = apply_lambda(cv, s);
    r.a[5] = -p.eps * (hs_inner(cross_product(cv, b), cv, s) - inner(cross_product(lcv, b), lcv));
    r.a[7] = 2.0 * p.eps * hs_inner(advective(v, b), cv, s);
  }
  r.a[6] = hs_inner(cross_product(v, u), cv, s);
  r.yu = sq(hs_norm(u, s));
  r.yb = sq(hs_norm(b, s));
  r.yv = sq(hs_norm(v, s));
  r.du = sq(hs_norm(u, s + 1.0));
  r.db = sq(hs_norm(b, s + 1.0));
  r.dv = sq(hs_norm(v, s + 1.0));
  return r;
}

double BudgetResidual::max() const { return std::max({u, b, v}); }

BudgetResidual budget_residual(const BudgetTerms& x, const BudgetTerms& y, double h, const PhysicalParams& p) {
  if (!(h > 0.0)) throw ArgumentError("budget_residual: step must be positive");
  auto one = [&](double y0, double y1, double d0, double d1, double rhs0, double rhs1, double mag0, double mag1) {
    const double lhs = 0.5 * (y1 - y0) / h + p.mu * 0.5 * (d0 + d1);
    const double rhs = 0.5 * (rhs0 + rhs1);
    const double scale = p.mu * 0.5 * (d0 + d1) + 0.5 * (mag0 + mag1);
    return rel_or_abs(std::abs(lhs - rhs), scale);
  };
  auto sum = [](const BudgetTerms& t, int lo, int hi, bool absval) {
    double s = 0.0;
    for (int i = lo; i <= hi; ++i) s += absval ? std::abs(t.a[i]) : t.a[i];
    return s;
  };
  BudgetResidual r;
  r.u = one(x.yu, y.yu, x.du, y.du, sum(x, 0, 1, false), sum(y, 0, 1, false), sum(x, 0, 1, true), sum(y, 0, 1, true));
  r.b = one(x.yb, y.yb, x.db, y.db, x.a[2], y.a[2], std::abs(x.a[2]), std::abs(y.a[2]));
  r.v = one(x.yv, y.yv, x.dv, y.dv, sum(x, 3, 7, false), sum(y, 3, 7, false), sum(x, 3, 7, true), sum(y, 3, 7, true));
  return r;
}

double fitted_critical_constant(const BudgetTerms& x, const BudgetTerms& y, double h, const PhysicalParams& p) {
  const double y0 = x.yu + x.yb + x.yv, y1 = y.yu + y.yb + y.yv;
  const double d0 = x.du + x.db + x.dv, d1 = y.du + y.db + y.dv;
  const double lhs = (y1 - y0) / h + p.mu * 0.5 * (d0 + d1);
  const double shape = 0.5 * (std::sqrt(y0) * d0 + std::sqrt(y1) * d1);
  if (lhs <= 0.0 || shape <= 0.0) return 0.0;
  return lhs / shape;
}

double cancellation_check(const SpectralVector& v, const SpectralVector& b) {
  require_same_grid(v.grid(), b.grid(), "cancellation_check");
  const auto cv = curl(v);
  const auto x = to_spectral(cross(to_physical(cv), to_physical(b)));
  const double num = std::abs(inner(curl(x), v));
  return rel_or_abs(num, l2_norm(x) * l2_norm(cv));
}

double adjointness_check(const SpectralVector& w, const SpectralVector& v) {
  require_same_grid(w.grid(), v.grid(), "adjointness_check");
  const auto cw = curl(w), cv = curl(v);
  const double num = std::abs(inner(cw, v) - inner(w, cv));
  return rel_or_abs(num, l2_norm(cw) * l2_norm(v) + l2_norm(w) * l2_norm(cv));
}

EnergySample energy_sample(const State& s) {
  return EnergySample{s.t, sq(hs_norm(s.u, 0.0)), sq(hs_norm(s.b, 0.0)), sq(hs_norm(s.u, 1.0)),
                      sq(hs_norm(s.b, 1.0))};
}

std::vector<double> energy_budget(const std::vector<EnergySample>& s, const PhysicalParams& p) {
  std::vector<double> out(s.size(), 0.0);
  if (s.empty()) return out;
  const double e0 = 0.5 * (s[0].u2 + s[0].b2);
  double diss = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double h = s[i].t - s[i - 1].t;
    diss += 0.5 * h * (p.mu * (s[i - 1].gu2 + s[i].gu2) + p.nu * (s[i - 1].gb2 + s[i].gb2));
    const double e = 0.5 * (s[i].u2 + s[i].b2);
    out[i] = rel_or_abs(std::abs(e + diss - e0), e0);
  }
  return out;
}

MonotonicityResult monotonicity_monitor(const std::vector<double>& t, const std::vector<double>& y,
                                        const std::vector<double>& d, double mu, double tol) {
  if (t.size() != y.size() || t.size() != d.size()) throw ArgumentError("monotonicity_monitor: length mismatch");
  std::vector<double> integral(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) integral[i] = integral[i - 1] + 0.5 * (t[i] - t[i - 1]) * (d[i] + d[i - 1]);
  return monotonicity_from_integral(y, integral, mu, tol);
}

MonotonicityResult monotonicity_from_integral(const std::vector<double>& y, const std::vector<double>& int_d,
                                              double mu, double tol) {
  if (y.size() != int_d.size()) throw ArgumentError("monotonicity_monitor: length mismatch");
  MonotonicityResult r;
  if (y.empty()) return r;
  const double y0 = y[0];
  const double allow = tol * y0;
  // F(t) = Y(t) + (mu/2) int_0^t D; the integrated form says F never exceeds
  // any earlier value of F.
  double fmin = y[0] + 0.5 * mu * int_d[0];
  for (std::size_t i = 1; i < y.size(); ++i) {
    const double up = y[i] - y[i - 1];
    if (up > 0.0) r.max_uptick = std::max(r.max_uptick, y0 > 0.0 ? up / y0 : up);
    if (up > allow) r.nonincreasing = false;
    const double f = y[i] + 0.5 * mu * int_d[i];
    const double excess = f - fmin;
    if (excess > 0.0) r.max_integrated_excess = std::max(r.max_integrated_excess, y0 > 0.0 ? excess / y0 : excess);
    if (excess > allow) r.integrated_holds = false;
    fmin = std::min(fmin, f);
  }
  return r;
}

DecayResult decay_monitor(const std::vector<double>& t, const std::vector<double>& y, double fraction,
                          int checkpoints) {
  if (t.size() != y.size()) throw ArgumentError("decay_monitor: length mismatch");
  DecayResult r;
  if (t.empty()) return r;
  const std::size_t n = t.size();
  const int m = std::max(1, checkpoints);
  for (int c = 0; c < m; ++c) {
    const std::size_t i = m == 1 ? n - 1 : std::size_t(double(c) * double(n - 1) / double(m - 1) + 0.5);
    r.checkpoints.push_back(y[i]);
  }
  if (y[0] <= 0.0) {
    r.final_ratio = 0.0;
    r.below = true;
    return r;
  }
  r.final_ratio = y.back() / y[0];
  r.below = r.final_ratio <= fraction;
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0.0)) continue;
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    ++k;
  }
  const double den = double(k) * stt - st * st;
  if (k >= 2 && den > 0.0) r.rate = -(double(k) * stl - st * sl) / den;
  return r;
}

WeakStrongReport weakstrong_monitor(const std::vector<State>& a, const std::vector<State>& b,
                                    const PhysicalParams& p) {
  p.validate();
  if (a.size() != b.size()) throw ArgumentError("weakstrong_monitor: runs have different sample counts");
  WeakStrongReport r;
  if (a.empty()) return r;
  const double pref = (1.0 + std::pow(p.eps, 4)) / std::pow(std::min(p.mu, p.nu), 3);
  double int_gdu = 0.0, int_gdb = 0.0, int_rhs = 0.0, int_w = 0.0;
  double prev_d2 = 0.0, prev_gdu = 0.0, prev_gdb = 0.0, prev_w = 0.0, prev_t = 0.0, d2_0 = 0.0;
  double sup_d2 = 0.0;
  std::vector<double> d2s, ws;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    require_same_grid(x.grid(), y.grid(), "weakstrong_monitor");
    if (std::abs(x.t - y.t) > 1e-12 * std::max(1.0, std::abs(x.t))) {
      throw ArgumentError("weakstrong_monitor: sample times differ");
    }
    const auto du = x.u - y.u;
    const auto db = x.b - y.b;
    TwinRunDelta d;
    d.t = x.t;
    d.du = l2_norm(du);
    d.db = l2_norm(db);
    if (x.v && y.v) d.dv = l2_norm(*x.v - *y.v);
    const double gdu = sq(hs_norm(du, 1.0)), gdb = sq(hs_norm(db, 1.0));
    d.weight = sq(sq(hs_norm(x.u, 1.0)) + sq(hs_norm(x.b, 1.0)) + sq(hs_norm(curl(x.b), 1.0)));
    const double d2 = sq(d.du) + sq(d.db);
    if (i == 0) {
      d2_0 = d2;
    } else {
      const double h = d.t - prev_t;
      int_gdu += 0.5 * h * (gdu + prev_gdu);
      int_gdb += 0.5 * h * (gdb + prev_gdb);
      int_rhs += 0.5 * h * (d2 * d.weight + prev_d2 * prev_w);
      int_w += 0.5 * h * (d.weight + prev_w);
    }
    d.int_gdu = int_gdu;
    d.int_gdb = int_gdb;
    d.gronwall_rhs = pref * int_rhs;
    if (i > 0 && d.gronwall_rhs > 0.0) {
      const double lhs = d2 + p.mu * int_gdu + p.nu * int_gdb - d2_0;
      if (lhs > 0.0) r.c_fit = std::max(r.c_fit, lhs / d.gronwall_rhs);
    }
    r.max_delta = std::max({r.max_delta, d.du, d.db, d.dv});
    sup_d2 = std::max(sup_d2, d2);
    d2s.push_back(d2);
    ws.push_back(int_w);
    r.deltas.push_back(d);
    prev_d2 = d2;
    prev_gdu = gdu;
    prev_gdb = gdb;
    prev_w = d.weight;
    prev_t = d.t;
  }
  for (std::size_t i = 0; i < d2s.size(); ++i) {
    const double bound = d2_0 * std::exp(r.c_fit * pref * ws[i]);
    if (d2s[i] > bound * (1.0 + 1e-12) + 1e-300) r.bound_holds = false;
  }
  return r;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t",     "u_l2",  "b_l2",   "u_h12",  "b_h12",       "v_h12",
                               "u_h32", "b_h32", "v_h32",  "diss_u", "diss_b",      "energy_drift",
                               "triple"};
    for (int i = 1; i <= 8; ++i) c.push_back("a" + std::to_string(i));
    c.insert(c.end(), {"res_u", "res_b", "res_v"});
    for (int i = 1; i <= 8; ++i) c.push_back("e" + std::to_string(i));
    c.insert(c.end(), {"eres_u", "eres_b", "eres_v", "c_critical", "cancellation", "V", "W", "e_residual", "v_drift"});
    return c;
  }();
  return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
  std::vector<double> v{r.t,     r.u_l2,  r.b_l2,  r.u_h12,  r.b_h12,  r.v_h12,        r.u_h32,
                        r.b_h32, r.v_h32, r.diss_u, r.diss_b, r.energy_drift, r.triple};
  v.insert(v.end(), r.a.begin(), r.a.end());
  v.insert(v.end(), {r.res_u, r.res_b, r.res_v});
  v.insert(v.end(), r.e.begin(), r.e.end());
  v.insert(v.end(), {r.eres_u, r.eres_b, r.eres_v, r.c_critical, r.cancellation, r.vt, r.wt, r.e_residual, r.v_drift});
  return v;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os) {
  const auto& c = record_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << '\n';
}

void write_csv_row(std::ostream& os, const DiagnosticsRecord& r) {
  const auto v = record_values(r);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_double(v[i]);
  os << '\n';
}

double v_quantity(const SpectralVector& u, const SpectralVector& b, const SpectralVector& v) {
  const double h1 = sq(hs_norm(u, 1.0)) + sq(hs_norm(b, 1.0)) + sq(hs_norm(v, 1.0));
  return h1 * h1 + sq(hs_norm(v, 1.5));
}

}  // namespace hallmhd
