#include "hallmhd/mhd3d.hpp"

#include <cmath>
#include <limits>
#include <list>
#include <string>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"

namespace hallmhd {

namespace {

constexpr Complex I{0.0, 1.0};

void check_finite(const SpectralVector& f, const char* term) {
  double s = 0.0;
  for (int c = 0; c < 3; ++c)
    for (auto z : f[c]) s += std::abs(z.real()) + std::abs(z.imag());
  if (!std::isfinite(s)) throw NumericError(std::string("non-finite values in ") + term);
}

void check_finite(double x, const char* term) {
  if (!std::isfinite(x)) throw NumericError(std::string("non-finite values in ") + term);
}

// Symmetric stress T = B (x) B - u (x) u, masked, as 6 spectral components
// ordered 00 01 02 11 12 22.
std::array<SpectralScalar, 6> stress(const PhysicalVector& u, const PhysicalVector& b) {
  const auto& gp = u.grid_ptr();
  std::array<SpectralScalar, 6> out{SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp),
                                    SpectralScalar(gp), SpectralScalar(gp), SpectralScalar(gp)};
  PhysicalScalar prod(gp);
  const std::size_t n = gp->real_size();
  int slot = 0;
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j, ++slot) {
      for (std::size_t x = 0; x < n; ++x) prod[x] = b[i][x] * b[j][x] - u[i][x] * u[j][x];
      out[slot] = product_to_spectral(prod);
    }
  }
  return out;
}

constexpr int sym_slot(int i, int j) {
  if (i > j) std::swap(i, j);
  return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

// P(div T) per mode.
SpectralVector projected_divergence(const std::array<SpectralScalar, 6>& t) {
  const auto& gp = t[0].grid_ptr();
  const auto& g = *gp;
  SpectralVector out(gp, true);
  for (std::size_t idx = 0; idx < g.spec_size(); ++idx) {
    const auto k = g.dk(idx);
    Complex d[3];
    for (int i = 0; i < 3; ++i)
      d[i] = I * (k[0] * t[sym_slot(i, 0)][idx] + k[1] * t[sym_slot(i, 1)][idx] + k[2] * t[sym_slot(i, 2)][idx]);
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex kd = kk > 0.0 ? (k[0] * d[0] + k[1] * d[1] + k[2] * d[2]) / kk : Complex{};
    for (int i = 0; i < 3; ++i) out[i][idx] = d[i] - k[i] * kd;
  }
  return out;
}

SpectralVector cross_masked(const PhysicalVector& a, const PhysicalVector& b) {
  return product_to_spectral(cross(a, b));
}

struct Nonlinear {
  Rhs n;
  double umax = 0.0, bmax = 0.0, vmax = 0.0;
};

Nonlinear nonlinear_physical(const State& s, const PhysicalParams& p) {
  const auto pu = to_physical(s.u);
  const auto pb = to_physical(s.b);
  Nonlinear out{Rhs{SpectralVector(s.grid_ptr()), SpectralVector(s.grid_ptr()), std::nullopt}};
  out.umax = pu.max_magnitude();
  out.bmax = pb.max_magnitude();
  check_finite(out.umax, "velocity");
  check_finite(out.bmax, "magnetic field");

  out.n.du = projected_divergence(stress(pu, pb));

  // Electron velocity u - eps J carries both the induction and the Hall term.
  PhysicalVector ue = pu;
  if (p.eps != 0.0) {
    const auto pj = to_physical(curl(s.b));
    for (int c = 0; c < 3; ++c)
      for (std::size_t x = 0; x < pj.grid().real_size(); ++x) ue[c][x] -= p.eps * pj[c][x];
  }
  out.n.db = curl(cross_masked(ue, pb));
  return out;
}

Nonlinear nonlinear_extended(const State& s, const PhysicalParams& p) {
  const auto& g = s.grid();
  const auto pu = to_physical(s.u);
  const auto pb = to_physical(s.b);
  const auto pv = to_physical(*s.v);
  Nonlinear out{Rhs{SpectralVector(s.grid_ptr()), SpectralVector(s.grid_ptr()), SpectralVector(s.grid_ptr(), true)}};
  out.umax = pu.max_magnitude();
  out.bmax = pb.max_magnitude();
  out.vmax = pv.max_magnitude();
  check_finite(out.umax, "velocity");
  check_finite(out.bmax, "magnetic field");
  check_finite(out.vmax, "electron velocity");

  out.n.du = projected_divergence(stress(pu, pb));

  const auto x = cross_masked(pv, pb);
  PhysicalVector ue = pu;
  if (p.eps != 0.0) {
    const auto pj = to_physical(curl(s.b));
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g.real_size(); ++i) ue[c][i] -= p.eps * pj[c][i];
  }
  const auto q = cross_masked(pv, ue);

  auto& db = out.n.db;
  auto& dv = *out.n.dv;
  db.set_divfree(true);
  for (std::size_t idx = 0; idx < g.spec_size(); ++idx) {
    const auto k = g.dk(idx);
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const Complex x0 = x[0][idx], x1 = x[1][idx], x2 = x[2][idx];
    const Complex c0 = I * (k[1] * x2 - k[2] * x1);
    const Complex c1 = I * (k[2] * x0 - k[0] * x2);
    const Complex c2 = I * (k[0] * x1 - k[1] * x0);
    db[0][idx] = c0;
    db[1][idx] = c1;
    db[2][idx] = c2;
    // curl curl X = |k|^2 X - k (k.X)
    const Complex kx = k[0] * x0 + k[1] * x1 + k[2] * x2;
    const Complex q0 = q[0][idx], q1 = q[1][idx], q2 = q[2][idx];
    dv[0][idx] = out.n.du[0][idx] + I * (k[1] * q2 - k[2] * q1) - p.eps * (kk * x0 - k[0] * kx);
    dv[1][idx] = out.n.du[1][idx] + I * (k[2] * q0 - k[0] * q2) - p.eps * (kk * x1 - k[1] * kx);
    dv[2][idx] = out.n.du[2][idx] + I * (k[0] * q1 - k[1] * q0) - p.eps * (kk * x2 - k[2] * kx);
  }
  return out;
}

void require_extended(const State& s, const PhysicalParams& p) {
  if (!s.v) throw ConfigError("extended formulation needs v");
  if (p.mu != p.nu) throw ConfigError("extended formulation requires mu = nu");
}

Nonlinear nonlinear(const State& s, const PhysicalParams& p) {
  if (s.v) {
    require_extended(s, p);
    return nonlinear_extended(s, p);
  }
  return nonlinear_physical(s, p);
}

void add_diffusion(SpectralVector& out, const SpectralVector& f, double coef) {
  const auto k2 = f.grid().k2();
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < k2.size(); ++i) out[c][i] -= coef * k2[i] * f[c][i];
}

Rhs with_diffusion(Rhs r, const State& s, const PhysicalParams& p) {
  add_diffusion(r.du, s.u, p.mu);
  add_diffusion(r.db, s.b, p.nu);
  if (r.dv) add_diffusion(*r.dv, *s.v, p.mu);
  check_finite(r.du, "momentum equation");
  check_finite(r.db, "induction equation");
  if (r.dv) check_finite(*r.dv, "electron velocity equation");
  return r;
}

double dt_limit(double umax, double bmax, double vmax, const Grid& g, const PhysicalParams& p, double c_h) {
  const double kmax = g.kmax();
  double dt = std::numeric_limits<double>::infinity();
  if (p.eps > 0.0 && bmax > 0.0) dt = std::min(dt, c_h / (p.eps * bmax * kmax * kmax));
  const double adv = std::max(umax, vmax) + bmax;
  if (adv > 0.0) dt = std::min(dt, c_h / (kmax * adv));
  return dt;
}

// e^{-coef |k|^2 dt} per mode. The last few (grid, coef, dt) are kept, since a
// run asks for the same factors every step.
const std::vector<double>& decay_factors(const Grid& g, double coef, double dt) {
  struct Entry {
    const Grid* g;
    double coef, dt;
    std::vector<double> e;
  };
  thread_local std::list<Entry> cache;  // references stay valid across inserts
  for (const auto& c : cache)
    if (c.g == &g && c.coef == coef && c.dt == dt) return c.e;
  if (cache.size() >= 4) cache.pop_front();
  const auto k2 = g.k2();
  std::vector<double> e(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) e[i] = std::exp(-coef * k2[i] * dt);
  cache.push_back({&g, coef, dt, std::move(e)});
  return cache.back().e;
}

// out = E (x + a n)
void if_combine(SpectralVector& out, const SpectralVector& x, const SpectralVector& n, double a,
                const std::vector<double>& e) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < e.size(); ++i) out[c][i] = e[i] * (x[c][i] + a * n[c][i]);
}

// out = E x + h (E n1 + n2)
void if_finish(SpectralVector& out, const SpectralVector& x, const SpectralVector& n1, const SpectralVector& n2,
               double h, const std::vector<double>& e) {
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < e.size(); ++i) out[c][i] = e[i] * x[c][i] + h * (e[i] * n1[c][i] + n2[c][i]);
}

// Leray projection and zero mean, in place.
void clean(SpectralVector& f) {
  const auto& g = f.grid();
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.dk(i);
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (kk == 0.0) continue;
    const Complex kf = (k[0] * f[0][i] + k[1] * f[1][i] + k[2] * f[2][i]) / kk;
    for (int c = 0; c < 3; ++c) f[c][i] -= k[c] * kf;
  }
  f.set_divfree(true);
  zero_mean(f);
}

}  // namespace

void PhysicalParams::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw ConfigError("mu must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be positive");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be nonnegative");
}

State::State(SpectralVector u_, SpectralVector b_, std::optional<SpectralVector> v_, double t_)
    : t(t_), u(std::move(u_)), b(std::move(b_)), v(std::move(v_)) {
  require_same_grid(u.grid(), b.grid(), "State");
  if (v) require_same_grid(u.grid(), v->grid(), "State");
}

Rhs rhs_physical(const State& s, const PhysicalParams& p) {
  p.validate();
  State phys(s.u, s.b, std::nullopt, s.t);
  return with_diffusion(nonlinear_physical(phys, p).n, phys, p);
}

SpectralVector hall_term(const SpectralVector& b, double eps) {
  if (eps == 0.0) return SpectralVector(b.grid_ptr(), true);
  auto h = curl(cross_product(curl(b), b));
  h *= eps;
  return h;
}

Rhs rhs_extended(const State& s, const PhysicalParams& p) {
  p.validate();
  require_extended(s, p);
  return with_diffusion(nonlinear_extended(s, p).n, s, p);
}

Rhs rhs_extended_terms(const State& s, const PhysicalParams& p) {
  p.validate();
  require_extended(s, p);
  const auto& v = *s.v;
  auto force = leray_project(advective(s.b, s.b) - advective(s.u, s.u));
  Rhs r{force, curl(cross_product(v, s.b)), force};
  auto& dv = *r.dv;
  dv.axpy(-p.eps, curl(cross_product(curl(v), s.b)));
  dv += curl(cross_product(v, s.u));
  dv.axpy(2.0 * p.eps, curl(advective(v, s.b)));
  return with_diffusion(std::move(r), s, p);
}

Rhs rhs(const State& s, const PhysicalParams& p) { return s.v ? rhs_extended(s, p) : rhs_physical(s, p); }

double stable_dt(const State& s, const PhysicalParams& p, double hall_cfl) {
  const double um = to_physical(s.u).max_magnitude();
  const double bm = to_physical(s.b).max_magnitude();
  const double vm = s.v ? to_physical(*s.v).max_magnitude() : 0.0;
  return dt_limit(um, bm, vm, s.grid(), p, hall_cfl);
}

State step(const State& s, const PhysicalParams& p, const StepControl& c) {
  p.validate();
  if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(c.hall_cfl > 0.0 && c.hall_cfl <= 1.0)) throw ConfigError("hall_cfl must lie in (0, 1]");
  const auto& g = s.grid();
  const double dt = c.dt;

  auto n1 = nonlinear(s, p);
  const double limit = dt_limit(n1.umax, n1.bmax, n1.vmax, g, p, c.hall_cfl);
  if (dt > limit) {
    throw CflError("time step " + std::to_string(dt) + " exceeds the stability limit " + std::to_string(limit), limit);
  }

  // Grids are cached for the process lifetime, so the factor cache keyed on
  // the grid address stays valid.
  const auto& eu = decay_factors(g, p.mu, dt);
  const auto& eb = decay_factors(g, p.nu, dt);

  State pred(SpectralVector(s.grid_ptr()), SpectralVector(s.grid_ptr()),
             s.v ? std::optional<SpectralVector>(SpectralVector(s.grid_ptr())) : std::nullopt, s.t + dt);
  if_combine(pred.u, s.u, n1.n.du, dt, eu);
  if_combine(pred.b, s.b, n1.n.db, dt, eb);
  if (s.v) if_combine(*pred.v, *s.v, *n1.n.dv, dt, eu);

  const auto n2 = nonlinear(pred, p);
  State next = std::move(pred);
  if_finish(next.u, s.u, n1.n.du, n2.n.du, 0.5 * dt, eu);
  if_finish(next.b, s.b, n1.n.db, n2.n.db, 0.5 * dt, eb);
  if (s.v) if_finish(*next.v, *s.v, *n1.n.dv, *n2.n.dv, 0.5 * dt, eu);
  clean(next.u);
  clean(next.b);
  if (next.v) clean(*next.v);
  // A non-finite first stage propagates into the second, so one check covers both.
  check_finite(next.u, "velocity update");
  check_finite(next.b, "magnetic update");
  if (next.v) check_finite(*next.v, "electron velocity update");
  next.t = s.t + dt;
  return next;
}

State advance(State s, const PhysicalParams& p, const StepControl& c, double t_end) {
  while (s.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    StepControl cc = c;
    cc.dt = std::min(c.dt, t_end - s.t);
    s = step(s, p, cc);
  }
  return s;
}

double redundancy_drift(const State& s, double eps) {
  if (!s.v) return 0.0;
  auto d = *s.v - s.u;
  d.axpy(eps, curl(s.b));
  return l2_norm(d);
}

double state_divergence(const State& s) {
  double m = std::max(max_divergence(s.u), max_divergence(s.b));
  if (s.v) m = std::max(m, max_divergence(*s.v));
  return m;
}

SpectralVector scale_field(const SpectralVector& f, int lambda) {
  if (lambda < 1) throw ArgumentError("scaling factor must be a positive integer");
  const auto& g = f.grid();
  SpectralVector out(f.grid_ptr(), f.is_divfree());
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const bool nonzero = f[0][i] != Complex{} || f[1][i] != Complex{} || f[2][i] != Complex{};
    if (!nonzero) continue;
    const auto [a, b, c] = g.lattice(i);
    const auto j = g.index_of(lambda * a, lambda * b, lambda * c);
    if (j < 0) throw ArgumentError("scale_field: scaled mode leaves the grid");
    for (int comp = 0; comp < 3; ++comp) out[comp][j] = double(lambda) * f[comp][i];
  }
  return out;
}

namespace {

int max_component(const SpectralVector& f) {
  const auto& g = f.grid();
  int m = 0;
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    if (std::abs(f[0][i]) + std::abs(f[1][i]) + std::abs(f[2][i]) == 0.0) continue;
    const auto k = g.lattice(i);
    m = std::max({m, std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
  }
  return m;
}

double rel(const SpectralVector& a, const SpectralVector& b) {
  const double nb = l2_norm(b);
  return nb > 0.0 ? l2_norm(a - b) / nb : l2_norm(a);
}

// Drops modes with max|k_i| > m; products of data with max|k_i| <= m/2 are
// exactly zero there, only transform roundoff lives outside.
SpectralVector box(const SpectralVector& f, int m) {
  auto out = f;
  const auto& g = f.grid();
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    const auto k = g.lattice(i);
    if (std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}) > m)
      for (int c = 0; c < 3; ++c) out[c][i] = Complex{};
  }
  return out;
}

}  // namespace

ScalingResiduals scaling_covariance_check(const SpectralVector& u, const SpectralVector& b,
                                          const PhysicalParams& p, int lambda) {
  if (lambda < 1) throw ArgumentError("scaling factor must be a positive integer");
  const int K = u.grid().dealias_cutoff();
  if (2 * lambda * std::max(max_component(u), max_component(b)) > K) {
    throw ArgumentError("scaling check needs data with 2 lambda max|k_i| <= K");
  }
  const double l2 = double(lambda) * lambda;
  const int m = 2 * std::max(max_component(u), max_component(b));
  auto scaled_box = [&](const SpectralVector& f) { return scale_field(box(f, m), lambda); };
  const auto su = scale_field(u, lambda), sb = scale_field(b, lambda);
  ScalingResiduals r;

  auto compare = [&](const PhysicalParams& base, const PhysicalParams& scaled) {
    const auto r0 = rhs_physical(State(u, b), base);
    const auto r1 = rhs_physical(State(su, sb), scaled);
    return std::max(rel(r1.du, l2 * scaled_box(r0.du)), rel(r1.db, l2 * scaled_box(r0.db)));
  };
  PhysicalParams mhd = p;
  mhd.eps = 0.0;
  r.mhd = compare(mhd, mhd);
  PhysicalParams scaled = p;
  scaled.eps = p.eps / lambda;
  r.hall_rescaled = compare(p, scaled);

  // J treated as an input scaled like u: eps curl(J_l x B_l) = lambda^2 S(eps curl(J x B)).
  const auto j = curl(b);
  const auto h0 = curl(cross_product(j, b));
  const auto h1 = curl(cross_product(scale_field(j, lambda), sb));
  r.hall_triple = rel(h1, l2 * scaled_box(h0));
  return r;
}

}  // namespace hallmhd
