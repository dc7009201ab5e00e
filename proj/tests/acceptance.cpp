// Acceptance criteria 1-10. `acceptance k` runs criterion k, no argument runs all.
// One line per criterion; exit status 0 iff every requested criterion passed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/experiments.hpp"
#include "hallmhd/initial.hpp"
#include "hallmhd/mhd25d.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/random.hpp"
#include "hallmhd/runner.hpp"
#include "hallmhd/sobolev.hpp"
#include "hallmhd/suites.hpp"

using namespace hallmhd;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::string worst_line(const SuiteReport& r) {
  std::string failing;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& l : r.lines) {
    if (!l.pass) failing += " " + l.name + "=" + fmt(l.value);
    if (l.threshold > 0.0 && std::isfinite(l.threshold) && l.value / l.threshold >= worst) {
      worst = l.value / l.threshold;
      worst_name = l.name;
    }
  }
  if (!failing.empty()) return "failing:" + failing;
  return "worst " + worst_name + " at " + fmt(worst) + " of its threshold";
}

RunOptions quiet() {
  RunOptions o;
  o.write_files = false;
  return o;
}

double rel(const SpectralVector& a, const SpectralVector& b) { return l2_norm(a - b) / l2_norm(b); }

Verdict c1() {
  const auto r = identity_suite_report(32, 200, 1, 1e-11);
  return {r.pass(), "200 fields, N = 32: " + worst_line(r)};
}

Verdict c2() {
  const auto r = cancellation_suite(32, 100, 1, 1e-12);
  return {r.pass(), "100 pairs, N = 32: " + worst_line(r)};
}

// B0 = delta ABC, u0 = 0: B(t) = delta e^{-nu t} ABC and u stays 0.
Verdict c3() {
  const auto g = Grid::make(3, 32);
  const PhysicalParams p{0.5, 0.5, 1.0};
  const double delta = 0.1;
  auto b = beltrami_field(g);
  b *= delta;
  SpectralVector u(g, true);
  auto v = u;
  v.axpy(-p.eps, curl(b));
  RunConfig c;
  c.n = 32;
  c.params = p;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.sample_every = 50;
  c.budgets = false;
  auto o = quiet();
  o.initial = State(u, b, v, 0.0);
  const auto r = run(c, o);
  if (!r.final_state) return {false, "run produced no final state"};
  auto expect = beltrami_field(g);
  expect *= delta * std::exp(-p.nu * 1.0);
  const auto& f = *r.final_state;
  const double err = std::hypot(l2_norm(f.u), l2_norm(f.b - expect)) / l2_norm(expect);
  const double rate_err = std::abs(r.decay.rate - 2.0 * p.mu) / (2.0 * p.mu);
  const bool ok = r.exit_code != kExitNumeric && err <= 1e-8 && rate_err <= 0.01;
  return {ok, "L2 error " + fmt(err) + " (<= 1e-8), triple-norm rate " + fmt(r.decay.rate) + " vs 2 mu = " +
                  fmt(2.0 * p.mu) + ", off by " + fmt(100.0 * rate_err) + "% (<= 1%)"};
}

Verdict c4() {
  auto drift = [](const std::string& dim, double dt) {
    RunConfig c;
    c.dimension = dim;
    c.formulation = dim == "3" ? Formulation::Extended : Formulation::Physical;
    c.n = 64;
    c.params = {0.05, 0.05, 1.0};
    c.dt = dt;
    c.t_end = 1.0;
    c.sample_every = int(std::lround(0.05 / dt));
    c.initial.amplitude = 0.05;
    c.initial.hi = 4.0;
    c.budgets = false;
    c.assert_monotone = false;
    const auto r = run(c, quiet());
    if (r.exit_code == kExitNumeric) throw NumericError(r.error);
    return r.max_energy_drift;
  };
  bool ok = true;
  std::string d;
  for (const std::string dim : {"3", "2.5"}) {
    const double a = drift(dim, 1e-3), b = drift(dim, 5e-4);
    const double ratio = a / b;
    ok = ok && a <= 1e-6 && ratio >= 3.5 && ratio <= 4.5;
    d += (d.empty() ? "" : "; ") + (dim == "3" ? std::string("3D extended") : std::string("2.5D")) + " drift " +
         fmt(a) + " (<= 1e-6), halving ratio " + fmt(ratio) + " (in [3.5, 4.5])";
  }
  return {ok, d};
}

Verdict c5() {
  const auto base = preset_config("threshold-bisect");
  const auto b = monotonicity_threshold(base, base.initial.amplitude, 1.0, 8);
  if (!(b.threshold > 0.0) || !std::isfinite(b.failing)) return {false, "no amplitude bracket found"};
  auto c = base;
  c.initial.amplitude = 0.1 * b.threshold;
  c.t_end = 1.0;
  const auto r = run(c, quiet());
  const auto& m = r.monotonicity;
  const bool ok = r.exit_code != kExitNumeric && m.nonincreasing && m.max_uptick <= 1e-8 && m.integrated_holds;
  return {ok, "threshold amplitude " + fmt(b.threshold) + " (" + std::to_string(b.runs) + " runs); at " +
                  fmt(c.initial.amplitude) + ": max uptick " + fmt(m.max_uptick) + " (<= 1e-8), integrated excess " +
                  fmt(m.max_integrated_excess) + (m.integrated_holds ? " holds" : " FAILS")};
}

Verdict c6() {
  auto residual = [](double dt) {
    RunConfig c;
    c.n = 32;
    c.params = {0.05, 0.05, 1.0};
    c.dt = dt;
    c.t_end = 0.2;
    c.sample_every = int(std::lround(0.01 / dt));
    c.initial.amplitude = 0.05;
    c.initial.hi = 4.0;
    c.assert_monotone = false;
    const auto r = run(c, quiet());
    if (r.exit_code == kExitNumeric) throw NumericError(r.error);
    return r.max_budget_residual;
  };
  const double a = residual(1e-3), b = residual(5e-4);
  const double ratio = a / b;
  const bool ok = a <= 1e-5 && ratio >= 3.5 && ratio <= 4.5;
  return {ok, "A1..A8 and E1..E8 worst residual " + fmt(a) + " (<= 1e-5), halving ratio " + fmt(ratio) +
                  " (in [3.5, 4.5])"};
}

Verdict c7() {
  auto cfg = [](double dt) {
    RunConfig c;
    c.dimension = "2.5";
    c.formulation = Formulation::Physical;
    c.n = 64;
    c.params = {0.1, 0.1, 1.0};
    c.dt = dt;
    c.t_end = 0.5;
    c.sample_every = int(std::lround(0.01 / dt));
    c.initial.amplitude = 0.05;
    c.initial.hi = 4.0;
    return c;
  };
  const auto ra = run(cfg(1e-3), quiet());
  const auto rb = run(cfg(5e-4), quiet());
  if (ra.exit_code == kExitNumeric || rb.exit_code == kExitNumeric) return {false, "numeric failure"};
  const double a = ra.max_e_residual, b = rb.max_e_residual;
  const double ratio = a / b;

  // rewritten induction right-hand side against the direct one
  const PhysicalParams p = cfg(1e-3).params;
  double rewritten = 0.0;
  for (const State& st : {initial_state(cfg(1e-3)), *ra.final_state}) {
    const State25D s(State(st.u, st.b, std::nullopt, st.t), p.eps);
    rewritten = std::max(rewritten, rel(rewritten_b_rhs(s, p), rhs_25d(s, p).db));
  }
  const bool ok = a <= 1e-5 && ratio >= 3.5 && ratio <= 4.5 && rewritten <= 1e-11;
  return {ok, "E residual " + fmt(a) + " (<= 1e-5), halving ratio " + fmt(ratio) + " (in [3.5, 4.5]), rewritten B " +
                  fmt(rewritten) + " (<= 1e-11)"};
}

Verdict c8() {
  auto twin = [](int n, const std::string& perturb) {
    return run_experiment("weak-strong-3d", {{"n", std::to_string(n)}, {"perturb", perturb}}, "unused", false);
  };
  const auto same = twin(16, "0");
  const auto a = twin(16, "1e-6");
  const auto b = twin(32, "1e-6");
  if (a.exit_code == kExitNumeric || b.exit_code == kExitNumeric || same.exit_code == kExitNumeric) {
    return {false, "numeric failure"};
  }
  const double d0 = same.detail["max_delta"].get<double>();
  const double ca = a.detail["c_fit"].get<double>(), cb = b.detail["c_fit"].get<double>();
  const bool bounds = a.detail["bound_holds"].get<bool>() && b.detail["bound_holds"].get<bool>();
  const double factor = ca > 0.0 && cb > 0.0 ? std::max(ca / cb, cb / ca) : INFINITY;
  const bool ok = d0 <= 1e-13 && bounds && factor <= 2.0;
  return {ok, "identical runs delta " + fmt(d0) + " (<= 1e-13); bound " + (bounds ? "holds" : "FAILS") +
                  "; fitted constant " + fmt(ca) + " (N = 16) vs " + fmt(cb) + " (N = 32), factor " + fmt(factor) +
                  " (<= 2)"};
}

Verdict c9() {
  const auto r = probe_suite();
  return {r.pass(), "N = 32 -> 64: " + worst_line(r)};
}

Verdict c10() {
  // exact partition on random fields, through the filters and the config path
  double recomb = 0.0;
  const auto g = Grid::make(3, 32);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_vector(g, 1, g->dealias_cutoff(), 0.0, 900 + std::uint64_t(i), true);
    for (double rho : {1.0, 2.5, 4.0, 7.3}) {
      const auto sum = band_filter(f, 0.0, rho) + band_filter(f, next_shell(*g, rho), INFINITY);
      recomb = std::max(recomb, rel(sum, f));
    }
  }
  {
    auto c = preset_config("freq-split-3d");
    const auto whole = initial_state(c);
    c.filter = "ball";
    c.filter_hi = 2.5;
    const auto lo = initial_state(c);
    c.filter = "annulus";
    c.filter_lo = next_shell(whole.grid(), 2.5);
    c.filter_hi = 1e9;
    const auto hi = initial_state(c);
    recomb = std::max({recomb, rel(lo.u + hi.u, whole.u), rel(lo.b + hi.b, whole.b)});
  }
  const auto rep = run_experiment("freq-split-3d", {}, "unused", false);
  const bool mono = rep.detail["high_part_nonincreasing"].get<bool>();
  const double rise = rep.detail["high_part_max_rise"].get<double>();
  const double split = rep.detail["recombination_residual"].get<double>();
  recomb = std::max(recomb, split);
  const bool ok = recomb <= 1e-13 && mono && rep.exit_code != kExitNumeric;
  return {ok, "recombination " + fmt(recomb) + " (<= 1e-13); high part after the first sample " +
                  (mono ? "nonincreasing" : "RISES") + ", max relative rise " + fmt(rise)};
}

struct Criterion {
  const char* title;
  double budget_s;
  std::function<Verdict()> check;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"operator identities", 30, c1},    {"Hall cancellation", 10, c2},  {"Beltrami exact decay", 60, c3},
      {"energy balance", 300, c4},        {"monotonicity", 120, c5},      {"budget identities", 120, c6},
      {"2.5D E equation", 120, c7},       {"weak-strong twin runs", 180, c8}, {"inequality probes", 120, c9},
      {"frequency splitting", 60, c10},
  };
  return list;
}

bool run_one(int k) {
  const auto& c = criteria()[std::size_t(k - 1)];
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = c.check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= c.budget_s;
  const bool pass = v.pass && in_time;
  std::printf("criterion %02d %s  %s: %s; %.1f s (limit %.0f s)%s\n", k, pass ? "PASS" : "FAIL", c.title,
              v.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER TIME");
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > int(criteria().size())) {
      std::fprintf(stderr, "usage: acceptance [1-%zu ...]\n", criteria().size());
      return 2;
    }
    which.push_back(k);
  }
  if (which.empty())
    for (int k = 1; k <= int(criteria().size()); ++k) which.push_back(k);
  bool all = true;
  for (int k : which) all = run_one(k) && all;
  return all ? 0 : 1;
}
