#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/errors.hpp"
#include "hallmhd/initial.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random.hpp"
#include "hallmhd/sobolev.hpp"

using namespace hallmhd;

namespace {

State small_extended(const GridPtr& g, double amp, std::uint64_t seed, double eps) {
  auto u = random_vector(g, 1, 3, 0, seed, true);
  auto b = random_vector(g, 1, 3, 0, seed + 1, true);
  u *= amp / l2_norm(u);
  b *= amp / l2_norm(b);
  auto v = u;
  v.axpy(-eps, curl(b));
  return State(u, b, v);
}

}  // namespace

TEST_CASE("budget terms vanish on trivial states") {
  auto g = Grid::make(3, 16);
  PhysicalParams p{0.2, 0.2, 0.7};
  State zero{SpectralVector(g), SpectralVector(g), SpectralVector(g)};
  auto z = budget_terms(zero, p, 0.5);
  for (double a : z.a) CHECK(a == 0.0);

  InitialSpec spec;
  spec.kind = "beltrami";
  spec.amplitude = 0.3;
  auto s = make_initial(g, spec, p, Formulation::Extended);
  for (double order : {0.5, 1.0}) {
    auto t = budget_terms(s, p, order);
    for (double a : t.a) CHECK(std::abs(a) < 1e-15);
  }
  CHECK_THROWS_AS(budget_terms(State(s.u, s.b), p, 0.5), ConfigError);
}

TEST_CASE("budget identities converge at second order") {
  auto g = Grid::make(3, 16);
  PhysicalParams p{0.1, 0.1, 0.5};
  auto s0 = small_extended(g, 0.5, 7, p.eps);
  for (double order : {0.5, 1.0}) {
    double prev = 0.0;
    for (double dt : {2e-3, 1e-3}) {
      auto s1 = step(s0, p, StepControl{dt, 1.0, 0.25});
      auto r = budget_residual(budget_terms(s0, p, order), budget_terms(s1, p, order), dt, p);
      CHECK(r.max() < 1e-4);
      if (prev > 0.0) {
        CHECK(prev / r.max() > 3.0);
        CHECK(prev / r.max() < 5.0);
      }
      prev = r.max();
    }
  }
}

TEST_CASE("budget terms sum to the solver right-hand side") {
  // 1/2 d/dt |v|_s^2 + mu|v|_{s+1}^2 = (Lambda^s dv_N | Lambda^s v) exactly
  auto g = Grid::make(3, 16);
  PhysicalParams p{0.1, 0.1, 0.8};
  auto s = small_extended(g, 0.4, 11, p.eps);
  auto r = rhs_extended(s, p);
  for (double order : {0.5, 1.0}) {
    auto t = budget_terms(s, p, order);
    const double du = hs_inner(r.du, s.u, order);
    const double db = hs_inner(r.db, s.b, order);
    const double dv = hs_inner(*r.dv, *s.v, order);
    CHECK(du + p.mu * t.du == doctest::Approx(t.a[0] + t.a[1]).epsilon(1e-11));
    CHECK(db + p.mu * t.db == doctest::Approx(t.a[2]).epsilon(1e-11));
    CHECK(dv + p.mu * t.dv == doctest::Approx(t.a[3] + t.a[4] + t.a[5] + t.a[6] + t.a[7]).epsilon(1e-10));
  }
}

TEST_CASE("cancellation and adjointness") {
  for (int dim : {2, 3}) {
    auto g = Grid::make(dim, 16);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      auto v = random_vector(g, 1, 7, 0, 300 + seed, true);
      auto b = random_vector(g, 1, 7, 0, 400 + seed, true);
      CHECK(cancellation_check(v, b) < 1e-13);
      CHECK(cancellation_check(v, v) < 1e-13);
      auto w = random_vector(g, 0, 10, 0, 500 + seed, false);
      CHECK(adjointness_check(w, v) < 1e-14);
    }
    SpectralVector zero(g);
    CHECK(cancellation_check(zero, zero) == 0.0);
  }
}

TEST_CASE("energy budget") {
  PhysicalParams p{0.1, 0.1, 0.5};
  CHECK(energy_budget({}, p).empty());
  std::vector<EnergySample> zeros(4);
  for (int i = 0; i < 4; ++i) zeros[i].t = i;
  for (double d : energy_budget(zeros, p)) CHECK(d == 0.0);

  auto g = Grid::make(3, 16);
  auto s = small_extended(g, 0.3, 21, p.eps);
  std::vector<EnergySample> samples{energy_sample(s)};
  for (int i = 0; i < 50; ++i) {
    s = step(s, p, StepControl{2e-3, 1.0, 0.25});
    samples.push_back(energy_sample(s));
  }
  auto d = energy_budget(samples, p);
  CHECK(d.front() == 0.0);
  CHECK(*std::max_element(d.begin(), d.end()) < 1e-6);
}

TEST_CASE("monotonicity monitor") {
  std::vector<double> t{0, 1, 2, 3}, y{4, 3, 2, 1}, d{1, 1, 1, 1};
  auto r = monotonicity_monitor(t, y, d, 1.0);
  CHECK(r.nonincreasing);
  CHECK(r.max_uptick == 0.0);
  CHECK(r.integrated_holds);
  y[2] = 3.5;
  r = monotonicity_monitor(t, y, d, 1.0);
  CHECK_FALSE(r.nonincreasing);
  CHECK(r.max_uptick == doctest::Approx(0.5 / 4));
  // decreasing but too slowly for the dissipation it claims
  r = monotonicity_monitor(t, {4, 3.9, 3.8, 3.7}, {1, 1, 1, 1}, 1.0);
  CHECK(r.nonincreasing);
  CHECK_FALSE(r.integrated_holds);
  r = monotonicity_monitor(t, {0, 0, 0, 0}, {0, 0, 0, 0}, 1.0);
  CHECK(r.nonincreasing);
  CHECK(r.integrated_holds);
  CHECK_THROWS_AS(monotonicity_monitor(t, {1}, d, 1.0), ArgumentError);
}

TEST_CASE("decay monitor") {
  std::vector<double> t, y;
  for (int i = 0; i <= 20; ++i) {
    t.push_back(0.1 * i);
    y.push_back(3.0 * std::exp(-0.4 * t.back()));
  }
  auto r = decay_monitor(t, y, 0.4, 3);
  CHECK(r.rate == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.final_ratio == doctest::Approx(std::exp(-0.8)));
  CHECK_FALSE(r.below);
  CHECK(r.checkpoints.size() == 3);
  CHECK(r.checkpoints[1] == doctest::Approx(y[10]));
  auto z = decay_monitor(t, std::vector<double>(t.size(), 0.0), 1e-4);
  CHECK(z.below);
  for (double c : z.checkpoints) CHECK(c == 0.0);
}

TEST_CASE("weak-strong monitor") {
  auto g = Grid::make(3, 16);
  PhysicalParams p{0.1, 0.1, 0.5};
  auto s = small_extended(g, 0.3, 31, p.eps);
  auto pert = s;
  const auto i = std::size_t(g->index_of(1, 0, 0));
  pert.u[1][i] += 1e-6;
  pert.v = pert.u;
  pert.v->axpy(-p.eps, curl(pert.b));

  std::vector<State> a{s}, b{s}, c{pert};
  for (int n = 0; n < 20; ++n) {
    a.push_back(step(a.back(), p, StepControl{5e-3, 1.0, 0.25}));
    b.push_back(step(b.back(), p, StepControl{5e-3, 1.0, 0.25}));
    c.push_back(step(c.back(), p, StepControl{5e-3, 1.0, 0.25}));
  }
  auto same = weakstrong_monitor(a, b, p);
  CHECK(same.max_delta == 0.0);
  CHECK(same.c_fit == 0.0);
  CHECK(same.bound_holds);

  auto diff = weakstrong_monitor(a, c, p);
  CHECK(diff.max_delta > 0.0);
  CHECK(diff.max_delta < 1e-5);
  CHECK(std::isfinite(diff.c_fit));
  CHECK(diff.bound_holds);
  CHECK(diff.deltas.size() == a.size());

  c.pop_back();
  CHECK_THROWS_AS(weakstrong_monitor(a, c, p), ArgumentError);
}

TEST_CASE("record serialization") {
  DiagnosticsRecord r;
  r.t = 0.1;
  r.a[7] = -1.0 / 3.0;
  r.v_drift = 1e-300;
  CHECK(record_values(r).size() == record_columns().size());
  std::ostringstream os;
  write_csv_header(os);
  write_csv_row(os, r);
  const auto text = os.str();
  CHECK(text.rfind("t,u_l2,b_l2,", 0) == 0);
  for (double x : {0.1, -1.0 / 3.0, 1e-300, 123456789.125, 0.0}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("V quantity") {
  auto g = Grid::make(3, 16);
  auto w = beltrami_field(g);
  // |w|^2 = 3 on the unit shell, so |(w, w, w)|_H1^4 = 81 and |w|_{H3/2}^2 = 3
  CHECK(v_quantity(w, w, w) == doctest::Approx(84.0).epsilon(1e-13));
}
