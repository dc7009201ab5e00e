#include "hallmhd/mhd25d.hpp"

#include <cmath>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/sobolev.hpp"

namespace hallmhd {

namespace {

double rel(const SpectralVector& a, const SpectralVector& b) {
  const double nb = l2_norm(b);
  const double d = l2_norm(a - b);
  return nb > 0.0 ? d / nb : d;
}

SpectralVector derived_e(const SpectralVector& omega, const SpectralVector& b, double eps) {
  SpectralVector e = b;
  e.axpy(eps, omega);
  return e;
}

void require_2d(const Grid& g) {
  if (g.dim() != 2) throw ShapeError("2.5D fields need a 2D lattice");
}

}  // namespace

State25D::State25D(State s, double eps)
    : s_(std::move(s)), eps_(eps), j_(curl(s_.b)), omega_(curl(s_.u)), e_(derived_e(omega_, s_.b, eps)) {
  require_2d(s_.grid());
  if (s_.v) throw ConfigError("2.5D state evolves (u, B) only");
}

double State25D::cache_defect() const {
  const auto j = curl(s_.b);
  const auto om = curl(s_.u);
  const auto e = derived_e(om, s_.b, eps_);
  return std::max({rel(j_, j), rel(omega_, om), rel(e_, e)});
}

Rhs rhs_25d(const State25D& s, const PhysicalParams& p) {
  p.validate();
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& j = s.j();
  auto du = leray_project(advective(b, b) - advective(u, u));
  du.axpy(p.mu, laplacian(u));
  auto db = advective(b, u) - advective(u, b);
  db.axpy(-p.eps, advective(b, j));
  db.axpy(p.eps, advective(j, b));
  db.axpy(p.nu, laplacian(b));
  return Rhs{std::move(du), std::move(db), std::nullopt};
}

State25D step_25d(const State25D& s, const PhysicalParams& p, const StepControl& c) {
  return State25D(step(s.state(), p, c), s.eps());
}

SpectralVector rewritten_b_rhs(const State25D& s, const PhysicalParams& p) {
  p.validate();
  const auto& u = s.u();
  const auto& b = s.b();
  const auto& j = s.j();
  auto db = advective(b, u) - advective(u, b);
  if (p.eps != 0.0) {
    auto hall = cross_product(laplacian(b), b);
    hall.axpy(2.0, advective(j, b));
    // grad~(j.B) of the dealiased scalar product
    const auto jb = product_to_spectral(dot(to_physical(j), to_physical(b)));
    hall -= gradient(jb);
    db.axpy(p.eps, hall);
  }
  db.axpy(p.nu, laplacian(b));
  return db;
}

double e_residual(const State25D& before, const State25D& after, const PhysicalParams& p, double dt) {
  p.validate();
  if (p.mu != p.nu) throw ConfigError("the E equation needs mu = nu");
  if (!(dt > 0.0)) throw ArgumentError("e_residual: dt must be positive");
  auto terms = [&](const State25D& s) {
    auto f = advective(s.e(), s.u()) - advective(s.u(), s.e());
    f.axpy(p.mu, laplacian(s.e()));
    return f;
  };
  auto res = after.e() - before.e();
  res *= 1.0 / dt;
  res.axpy(-0.5, terms(before));
  res.axpy(-0.5, terms(after));
  const double scale = 0.5 * (l2_norm(before.e()) + l2_norm(after.e()));
  const double r = l2_norm(res);
  if (scale == 0.0) return r == 0.0 ? 0.0 : r;
  return r / scale;
}

IdentityReport identity_suite(const SpectralVector& y, const SpectralVector& z, const SpectralVector& a,
                              const SpectralVector& b, const SpectralVector& c) {
  IdentityReport r;
  const double ny = l2_norm(y), nz = l2_norm(z);
  const bool divfree = l2_norm(divergence(y)) <= 1e-12 * std::max(ny, 1e-300) * std::max(1.0, double(y.grid().n())) &&
                       l2_norm(divergence(z)) <= 1e-12 * std::max(nz, 1e-300) * std::max(1.0, double(z.grid().n()));
  if (divfree) {
    const auto lhs = curl(cross_product(y, z));
    const auto rhs = advective(z, y) - advective(y, z);
    const double scale = std::max({l2_norm(advective(z, y)), l2_norm(advective(y, z)), 1e-300});
    r.i1 = l2_norm(lhs - rhs) / scale;
  } else {
    r.i1_skipped = true;
  }

  const auto pa = to_physical(a), pb = to_physical(b), pc = to_physical(c);
  const auto t1 = dot(cross(pa, pb), pc);
  const auto t2 = dot(cross(pc, pa), pb);
  const auto t3 = dot(cross(pb, pc), pa);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t1.grid().real_size(); ++i) {
    num = std::max({num, std::abs(t1[i] - t2[i]), std::abs(t1[i] - t3[i])});
    const double mag = [&] {
      double ma = 0, mb = 0, mc = 0;
      for (int k = 0; k < 3; ++k) {
        ma += pa[k][i] * pa[k][i];
        mb += pb[k][i] * pb[k][i];
        mc += pc[k][i] * pc[k][i];
      }
      return std::sqrt(ma * mb * mc);
    }();
    den = std::max(den, mag);
  }
  r.triple = den > 0.0 ? num / den : num;

  const auto lap = laplacian(y);
  const double ln = l2_norm(lap);
  const double dc = l2_norm(curl(curl(y)) + lap);
  r.double_curl = ln > 0.0 ? dc / ln : dc;
  return r;
}

double w_quantity(const SpectralVector& u) {
  const double l2 = hs_norm(u, 0.0), h1 = hs_norm(u, 1.0), h2 = hs_norm(u, 2.0);
  return l2 * l2 * h1 * h1 + h1 * h2;
}

Sample25D sample_25d(const State25D& s) {
  Sample25D r;
  r.t = s.t();
  const auto& u = s.u();
  const auto& b = s.b();
  auto v = u;
  v.axpy(-s.eps(), s.j());
  auto sq = [](double x) { return x * x; };
  r.u2 = sq(hs_norm(u, 0.0));
  r.b2 = sq(hs_norm(b, 0.0));
  r.v2 = sq(hs_norm(v, 0.0));
  r.gu2 = sq(hs_norm(u, 1.0));
  r.gb2 = sq(hs_norm(b, 1.0));
  r.gv2 = sq(hs_norm(v, 1.0));
  r.lapb2 = sq(hs_norm(b, 2.0));
  r.w = w_quantity(u);
  r.om2 = sq(hs_norm(s.omega(), 0.0));
  r.gom2 = sq(hs_norm(s.omega(), 1.0));
  r.e2 = sq(hs_norm(s.e(), 0.0));
  return r;
}

Fitted25D fit_constants_25d(const std::vector<Sample25D>& s, const PhysicalParams& p) {
  Fitted25D f;
  if (s.empty()) return f;
  const auto& s0 = s.front();
  const double e0 = 0.5 * (s0.u2 + s0.b2);
  const double a4 = (s0.u2 + s0.b2) * (s0.u2 + s0.b2);
  const double z0 = s0.om2 + s0.b2;
  double diss = 0.0, omega_int = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto& a = s[i - 1];
    const auto& b = s[i];
    const double h = b.t - a.t;
    auto mid = [](double x, double y) { return 0.5 * (x + y); };

    const double lhs_v = (b.v2 - a.v2) / h + p.mu * mid(a.gv2, b.gv2);
    const double rhs_v = mid(a.u2 + a.b2 + a.v2, b.u2 + b.b2 + b.v2) * mid(a.gu2 + a.gb2 + a.gv2, b.gu2 + b.gb2 + b.gv2);
    if (rhs_v > 0.0) f.c_v = std::max(f.c_v, lhs_v / rhs_v);

    const double h1a = a.b2 + a.gb2, h1b = b.b2 + b.gb2;
    const double lhs_h = (h1b - h1a) / h + p.nu * mid(a.gb2 + a.lapb2, b.gb2 + b.lapb2);
    const double rhs_h = mid(a.w * h1a, b.w * h1b) + mid(std::sqrt(a.gb2) * a.lapb2, std::sqrt(b.gb2) * b.lapb2);
    if (rhs_h > 0.0) f.c_h1 = std::max(f.c_h1, lhs_h / rhs_h);

    omega_int += h * mid(a.gom2, b.gom2);
    if (z0 > 0.0 && a4 > 0.0) {
      const double excess = (b.om2 + p.mu * omega_int) / (2.0 * z0) - 1.0;
      if (excess > 1.0) f.c_omega = std::max(f.c_omega, std::log(excess) / a4);
    }

    diss += h * mid(p.mu * a.gu2 + p.nu * a.gb2, p.mu * b.gu2 + p.nu * b.gb2);
    if (e0 > 0.0) f.energy_drift = std::max(f.energy_drift, std::abs(0.5 * (b.u2 + b.b2) + diss - e0) / e0);
  }
  return f;
}

}  // namespace hallmhd
