#include "hallmhd/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/snapshot.hpp"
#include "hallmhd/sobolev.hpp"

namespace hallmhd {

namespace fs = std::filesystem;

namespace {

double sq(double x) { return x * x; }

SpectralVector electron_velocity(const State& s, double eps) {
  if (s.v) return *s.v;
  auto v = s.u;
  v.axpy(-eps, curl(s.b));
  return v;
}

// Per-step Hdot^{3/2} triple sum of u, B and v, in one pass over the modes.
struct StepQuantities {
  double d = 0.0;
};

StepQuantities step_quantities(const State& s, double eps) {
  const auto& g = s.grid();
  const auto w = g.weight();
  const auto k2 = g.k2();
  double sum = 0.0;
  for (std::size_t i = 0; i < g.spec_size(); ++i) {
    if (k2[i] == 0.0) continue;
    double e = 0.0;
    for (int c = 0; c < 3; ++c) e += std::norm(s.u[c][i]) + std::norm(s.b[c][i]);
    if (s.v) {
      for (int c = 0; c < 3; ++c) e += std::norm((*s.v)[c][i]);
    } else {
      const auto k = g.dk(i);
      const Complex I(0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        e += std::norm(s.u[c][i] - eps * I * (k[a] * s.b[b][i] - k[b] * s.b[a][i]));
      }
    }
    sum += w[i] * k2[i] * std::sqrt(k2[i]) * e;
  }
  if (!std::isfinite(sum)) throw NumericError("non-finite Hdot^{3/2} norm");
  return {sum};
}

// w |f(k)|^2 summed over components, per stored mode.
std::vector<double> mode_energy(const SpectralVector& f) {
  const auto& g = f.grid();
  const auto w = g.weight();
  std::vector<double> e(g.spec_size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = w[i] * (std::norm(f[0][i]) + std::norm(f[1][i]) + std::norm(f[2][i]));
  return e;
}

// int over one step of sum_k |k|^2 e_k(t), each e_k interpolated geometrically
// between the endpoints (exact under pure viscous decay).
double dissipation_step(const Grid& g, const std::vector<double>& a, const std::vector<double>& b, double h) {
  const auto k2 = g.k2();
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (k2[i] == 0.0) continue;
    const double x = a[i], y = b[i];
    double mean;
    if (x <= 0.0 || y <= 0.0) {
      mean = 0.5 * (x + y);
    } else {
      const double r = y / x;
      mean = std::abs(r - 1.0) < 1e-6 ? 0.5 * (x + y) * (1.0 - (r - 1.0) * (r - 1.0) / (12.0 * r)) : (x - y) / std::log(x / y);
    }
    sum += k2[i] * mean;
  }
  return h * sum;
}

State25D as_25d(const State& s, double eps) { return State25D(State(s.u, s.b, std::nullopt, s.t), eps); }

std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%04d.hmhd", index);
  return buf;
}

struct BudgetPair {
  BudgetTerms half, one;
};

BudgetPair both_budgets(const State& s, const PhysicalParams& p) {
  return {budget_terms(s, p, 0.5), budget_terms(s, p, 1.0)};
}

}  // namespace

const MonitorResult* RunResult::monitor(const std::string& name) const {
  for (const auto& m : monitors)
    if (m.name == name) return &m;
  return nullptr;
}

State initial_state(const RunConfig& cfg) {
  cfg.validate();
  const auto g = Grid::make(cfg.grid_dim(), cfg.n);
  auto s = make_initial(g, cfg.initial, cfg.params, cfg.formulation);
  if (cfg.filter == "none") return s;
  const double lo = cfg.filter == "ball" ? 0.0 : cfg.filter_lo;
  s.u = band_filter(s.u, lo, cfg.filter_hi);
  s.b = band_filter(s.b, lo, cfg.filter_hi);
  if (s.v) {
    auto v = s.u;
    v.axpy(-cfg.params.eps, curl(s.b));
    s.v = v;
  }
  return s;
}

RunResult run(const RunConfig& cfg, const RunOptions& opts) {
  cfg.validate();
  const auto& p = cfg.params;
  State s = opts.initial ? *opts.initial : initial_state(cfg);
  if (s.grid().dim() != cfg.grid_dim() || s.grid().n() != cfg.n) {
    throw ConfigError("initial state does not match the configured grid");
  }
  if (s.formulation() != cfg.formulation) throw ConfigError("initial state does not match the configured formulation");
  {
    const double lim = stable_dt(s, p, cfg.hall_cfl);
    if (cfg.dt > lim) {
      throw ConfigError("dt = " + format_double(cfg.dt) + " exceeds the stability limit " + format_double(lim) +
                        " of the initial data");
    }
  }

  RunResult res;
  res.config = cfg;
  const bool budgets = cfg.grid_dim() == 3 && cfg.formulation == Formulation::Extended && cfg.budgets;
  const bool e_check = cfg.grid_dim() == 2 && p.mu == p.nu;
  const bool is_25d = cfg.grid_dim() == 2;

  std::ofstream csv;
  const fs::path out(cfg.out);
  if (opts.write_files) {
    fs::create_directories(out);
    csv.open(out / "timeseries.csv", std::ios::trunc);
    if (!csv) throw ConfigError("cannot write to output directory " + cfg.out);
    write_csv_header(csv);
  }

  auto snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  int snap_index = 0;
  auto write_due_snapshots = [&](const State& st) {
    while (next_snap < snaps.size() && snaps[next_snap] <= st.t + 0.5 * cfg.dt) {
      if (opts.write_files) write_snapshot((out / snapshot_name(snap_index)).string(), st);
      ++snap_index;
      ++next_snap;
    }
  };

  const auto q0 = step_quantities(s, p.eps);
  StepQuantities q = q0;
  const double e0 = 0.5 * (sq(l2_norm(s.u)) + sq(l2_norm(s.b)));
  auto eu = mode_energy(s.u), eb = mode_energy(s.b);
  double diss_u = 0.0, diss_b = 0.0, int_d = 0.0;
  std::vector<Sample25D> samples25;

  auto record = [&](const State& st, const State* prev, const BudgetPair* before, const BudgetPair* after) {
    DiagnosticsRecord r;
    r.t = st.t;
    const auto v = electron_velocity(st, p.eps);
    r.u_l2 = l2_norm(st.u);
    r.b_l2 = l2_norm(st.b);
    r.u_h12 = hs_norm(st.u, 0.5);
    r.b_h12 = hs_norm(st.b, 0.5);
    r.v_h12 = hs_norm(v, 0.5);
    r.u_h32 = hs_norm(st.u, 1.5);
    r.b_h32 = hs_norm(st.b, 1.5);
    r.v_h32 = hs_norm(v, 1.5);
    r.diss_u = diss_u;
    r.diss_b = diss_b;
    const double e = 0.5 * (sq(r.u_l2) + sq(r.b_l2));
    const double drift = std::abs(e + diss_u + diss_b - e0);
    r.energy_drift = e0 > 0.0 ? drift / e0 : drift;
    r.triple = sq(r.u_h12) + sq(r.b_h12) + sq(r.v_h12);
    if (after) {
      r.a = after->half.a;
      r.e = after->one.a;
      if (before && prev) {
        const double h = st.t - prev->t;
        const auto rh = budget_residual(before->half, after->half, h, p);
        const auto ro = budget_residual(before->one, after->one, h, p);
        r.res_u = rh.u;
        r.res_b = rh.b;
        r.res_v = rh.v;
        r.eres_u = ro.u;
        r.eres_b = ro.b;
        r.eres_v = ro.v;
        r.c_critical = fitted_critical_constant(before->half, after->half, h, p);
      }
    }
    r.cancellation = cancellation_check(v, st.b);
    r.vt = v_quantity(st.u, st.b, v);
    r.wt = w_quantity(st.u);
    if (e_check && prev) r.e_residual = e_residual(as_25d(*prev, p.eps), as_25d(st, p.eps), p, st.t - prev->t);
    if (st.v) {
      const double nv = l2_norm(*st.v);
      const double d = redundancy_drift(st, p.eps);
      r.v_drift = nv > 0.0 ? d / nv : d;
    }
    if (is_25d) samples25.push_back(sample_25d(as_25d(st, p.eps)));

    res.max_energy_drift = std::max(res.max_energy_drift, r.energy_drift);
    res.max_budget_residual = std::max({res.max_budget_residual, r.res_u, r.res_b, r.res_v, r.eres_u, r.eres_b, r.eres_v});
    res.max_e_residual = std::max(res.max_e_residual, r.e_residual);
    res.max_c_critical = std::max(res.max_c_critical, r.c_critical);
    res.triple.push_back(r.triple);
    res.triple_dissipation.push_back(int_d);
    if (opts.keep_states) res.states.push_back(st);
    if (csv.is_open()) write_csv_row(csv, r);
    res.records.push_back(r);
  };

  std::optional<BudgetPair> cached;
  if (budgets) cached = both_budgets(s, p);
  record(s, nullptr, nullptr, cached ? &*cached : nullptr);
  write_due_snapshots(s);

  const long nsteps = cfg.t_end > 0.0 ? long(std::ceil(cfg.t_end / cfg.dt - 1e-9)) : 0;
  bool cached_is_current = budgets;
  for (long k = 0; k < nsteps; ++k) {
    const bool sample_next = (k + 1) % cfg.sample_every == 0 || k + 1 == nsteps;
    std::optional<BudgetPair> before;
    if (budgets && sample_next) before = cached_is_current ? *cached : both_budgets(s, p);
    std::optional<State> prev;
    if (sample_next && (budgets || e_check)) prev = s;

    StepControl sc{std::min(cfg.dt, cfg.t_end - s.t), cfg.t_end, cfg.hall_cfl};
    if (k + 1 == nsteps) sc.dt = cfg.t_end - s.t;
    try {
      if (!(sc.dt > 0.0)) break;
      s = step(s, p, sc);
    } catch (const Error& e) {
      if (!dynamic_cast<const CflError*>(&e) && !dynamic_cast<const NumericError*>(&e)) throw;
      res.exit_code = kExitNumeric;
      res.error = std::string("step ") + std::to_string(k + 1) + " at t = " + format_double(s.t) + ": " + e.what();
      if (opts.write_files) write_snapshot((out / "last_good.hmhd").string(), s);
      res.final_state = s;
      res.steps = k;
      break;
    }
    res.steps = k + 1;
    const auto qn = step_quantities(s, p.eps);
    auto eu_n = mode_energy(s.u), eb_n = mode_energy(s.b);
    diss_u += p.mu * dissipation_step(s.grid(), eu, eu_n, sc.dt);
    diss_b += p.nu * dissipation_step(s.grid(), eb, eb_n, sc.dt);
    eu = std::move(eu_n);
    eb = std::move(eb_n);
    int_d += 0.5 * sc.dt * (q.d + qn.d);
    q = qn;
    cached_is_current = false;
    if (sample_next) {
      std::optional<BudgetPair> after;
      if (budgets) {
        after = both_budgets(s, p);
        cached = after;
        cached_is_current = true;
      }
      record(s, prev ? &*prev : nullptr, before ? &*before : nullptr, after ? &*after : nullptr);
    }
    write_due_snapshots(s);
  }

  if (res.exit_code != kExitNumeric) {
    res.final_state = s;
    if (opts.write_files) write_snapshot((out / "final.hmhd").string(), s);
  }

  // monitors
  std::vector<double> ts;
  for (const auto& r : res.records) ts.push_back(r.t);
  res.monotonicity = monotonicity_from_integral(res.triple, res.triple_dissipation, p.mu, cfg.tol_uptick);
  res.decay = decay_monitor(ts, res.triple, cfg.decay_fraction > 0.0 ? cfg.decay_fraction : 1.0);
  double max_cancel = 0.0, max_vdrift = 0.0;
  for (const auto& r : res.records) {
    max_cancel = std::max(max_cancel, r.cancellation);
    max_vdrift = std::max(max_vdrift, r.v_drift);
  }
  res.monitors.push_back({"energy_balance", res.max_energy_drift <= cfg.tol_energy, true, res.max_energy_drift,
                          cfg.tol_energy});
  const double mono_value = std::max(res.monotonicity.max_uptick, res.monotonicity.max_integrated_excess);
  res.monitors.push_back({"monotonicity", res.monotonicity.nonincreasing && res.monotonicity.integrated_holds,
                          cfg.grid_dim() == 3 && cfg.assert_monotone, mono_value, cfg.tol_uptick});
  res.monitors.push_back({"decay", res.decay.below, cfg.decay_fraction > 0.0, res.decay.final_ratio,
                          cfg.decay_fraction});
  if (budgets) {
    res.monitors.push_back({"budget_identities", res.max_budget_residual <= cfg.tol_budget, true,
                            res.max_budget_residual, cfg.tol_budget});
  }
  if (e_check) {
    res.monitors.push_back({"e_equation", res.max_e_residual <= cfg.tol_e, true, res.max_e_residual, cfg.tol_e});
  }
  res.monitors.push_back({"hall_cancellation", max_cancel <= cfg.tol_cancellation, true, max_cancel,
                          cfg.tol_cancellation});
  if (cfg.formulation == Formulation::Extended) {
    res.monitors.push_back({"redundancy", max_vdrift <= cfg.tol_redundancy, true, max_vdrift, cfg.tol_redundancy});
  }
  if (is_25d) res.fitted = fit_constants_25d(samples25, p);

  if (res.exit_code == kExitPass) {
    for (const auto& m : res.monitors)
      if (m.asserted && !m.pass) res.exit_code = kExitMonitor;
  }
  if (opts.write_files) {
    csv.flush();
    std::ofstream js(out / "summary.json", std::ios::trunc);
    js << summary_json(res).dump(2) << '\n';
  }
  return res;
}

nlohmann::ordered_json summary_json(const RunResult& r) {
  nlohmann::ordered_json j;
  j["pass"] = r.pass();
  j["exit_code"] = r.exit_code;
  if (!r.error.empty()) j["error"] = r.error;
  j["steps"] = r.steps;
  j["t_final"] = r.records.empty() ? 0.0 : r.records.back().t;
  auto& ms = j["monitors"];
  ms = nlohmann::ordered_json::array();
  for (const auto& m : r.monitors) {
    ms.push_back({{"name", m.name}, {"pass", m.pass}, {"asserted", m.asserted}, {"value", m.value},
                  {"threshold", m.threshold}});
  }
  j["decay"] = {{"rate", r.decay.rate}, {"final_ratio", r.decay.final_ratio}, {"checkpoints", r.decay.checkpoints}};
  j["monotonicity"] = {{"nonincreasing", r.monotonicity.nonincreasing},
                       {"max_uptick", r.monotonicity.max_uptick},
                       {"integrated_holds", r.monotonicity.integrated_holds},
                       {"max_integrated_excess", r.monotonicity.max_integrated_excess}};
  auto& fitted = j["fitted_constants"];
  fitted = nlohmann::ordered_json::object();
  if (r.config.grid_dim() == 3 && r.config.formulation == Formulation::Extended && r.config.budgets) {
    fitted["critical_budget"] = r.max_c_critical;
  }
  if (r.fitted) {
    fitted["electron_velocity"] = r.fitted->c_v;
    fitted["magnetic_h1"] = r.fitted->c_h1;
    fitted["vorticity"] = r.fitted->c_omega;
  }
  nlohmann::ordered_json cfg;
  const auto m = r.config.to_map();
  for (const auto& k : config_keys()) cfg[k] = m.at(k);
  j["config"] = cfg;
  return j;
}

}  // namespace hallmhd
