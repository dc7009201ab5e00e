#include "hallmhd/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hallmhd/errors.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/sobolev.hpp"

namespace hallmhd {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKnobs = {"perturb", "split_rho", "b_ratio", "bisect_iters"};

double knob(const std::map<std::string, std::string>& o, const std::string& key, double fallback) {
  const auto it = o.find(key);
  if (it == o.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double x = std::stod(it->second, &pos);
    if (pos != it->second.size() || !std::isfinite(x)) throw ConfigError("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("bad value for " + key + ": '" + it->second + "'");
  }
}

RunConfig configured(const std::string& id, const std::map<std::string, std::string>& overrides, const fs::path& out) {
  auto cfg = preset_config(id);
  for (const auto& [k, v] : overrides) {
    if (std::find(kKnobs.begin(), kKnobs.end(), k) != kKnobs.end()) continue;
    cfg.set(k, v);
  }
  cfg.out = out.string();
  cfg.validate();
  return cfg;
}

nlohmann::ordered_json run_json(const RunResult& r) {
  auto j = summary_json(r);
  j.erase("config");
  return j;
}

void recompute_v(State& s, double eps) {
  if (!s.v) return;
  auto v = s.u;
  v.axpy(-eps, curl(s.b));
  s.v = v;
}

double pair_l2(const State& s) { return std::hypot(l2_norm(s.u), l2_norm(s.b)); }

}  // namespace

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids = {"fujita-kato-3d", "decay-3d",      "freq-split-3d",   "weak-strong-3d",
                                               "small-data-2p5d", "small-B-2p5d", "threshold-bisect"};
  return ids;
}

std::string preset_statement(const std::string& id) {
  if (id == "fujita-kato-3d") return "small critical data: Y(t) nonincreasing, energy balance, decay below 0.2 Y(0)";
  if (id == "decay-3d") return "long run from small data: Y(T) below 1e-4 Y(0)";
  if (id == "freq-split-3d") return "low/high split recombines exactly; the high part stays nonincreasing";
  if (id == "weak-strong-3d") return "twin runs from perturbed data stay within the weak-strong Gronwall bound";
  if (id == "small-data-2p5d") return "2.5D small data, mu = nu: E equation residual and fitted constants";
  if (id == "small-B-2p5d") return "2.5D with B much smaller than u: energy balance and fitted constants";
  if (id == "threshold-bisect") return "bisected amplitude where the monotonicity monitor first fails";
  throw ConfigError("unknown preset '" + id + "'");
}

RunConfig preset_config(const std::string& id) {
  preset_statement(id);
  RunConfig c;
  c.out = id;
  c.dimension = "3";
  c.formulation = Formulation::Extended;
  c.initial.kind = "random_band";
  c.initial.lo = 1.0;
  c.initial.hi = 4.0;
  c.initial.seed = 1;
  if (id == "fujita-kato-3d") {
    c.n = 32;
    c.params = {1.0, 1.0, 1.0};
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.sample_every = 10;
    c.initial.amplitude = 1e-2;
    c.budgets = false;
    c.decay_fraction = 0.2;
  } else if (id == "decay-3d") {
    c.n = 16;
    c.params = {1.0, 1.0, 1.0};
    c.dt = 5e-3;
    c.t_end = 10.0;
    c.sample_every = 20;
    c.initial.amplitude = 1e-2;
    c.initial.hi = 3.0;
    c.budgets = false;
    c.decay_fraction = 1e-4;
  } else if (id == "freq-split-3d") {
    c.n = 32;
    c.params = {0.5, 0.5, 1.0};
    c.dt = 2e-3;
    c.t_end = 1.0;
    c.sample_every = 25;
    c.initial.amplitude = 0.05;
    c.initial.hi = 8.0;
    c.budgets = false;
  } else if (id == "weak-strong-3d") {
    c.n = 16;
    c.params = {0.05, 0.05, 1.0};
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.sample_every = 5;
    c.initial.amplitude = 0.3;
    c.initial.hi = 3.0;
    c.budgets = false;
    c.assert_monotone = false;
  } else if (id == "small-data-2p5d" || id == "small-B-2p5d") {
    c.dimension = "2.5";
    c.formulation = Formulation::Physical;
    c.n = 64;
    c.params = {0.1, 0.1, 1.0};
    c.dt = 1e-3;
    c.t_end = 1.0;
    c.sample_every = 10;
    c.initial.amplitude = id == "small-B-2p5d" ? 0.2 : 0.05;
    c.assert_monotone = false;
  } else {  // threshold-bisect
    c.n = 16;
    c.params = {0.1, 0.1, 1.0};
    c.dt = 2e-3;
    c.t_end = 0.5;
    c.sample_every = 1;
    c.initial.amplitude = 1e-3;
    c.initial.hi = 3.0;
    c.budgets = false;
  }
  return c;
}

ExperimentReport run_experiment(const std::string& id, const std::map<std::string, std::string>& overrides,
                                const std::string& out, bool write_files) {
  ExperimentReport rep;
  rep.id = id;
  rep.statement = preset_statement(id);
  const fs::path root(out);
  auto& d = rep.detail;
  RunOptions opts;
  opts.write_files = write_files;

  auto finish_single = [&](const RunResult& r) {
    d["run"] = run_json(r);
    rep.exit_code = r.exit_code;
    rep.pass = r.pass();
  };

  if (id == "fujita-kato-3d" || id == "decay-3d") {
    const auto cfg = configured(id, overrides, root / "run");
    finish_single(run(cfg, opts));
  } else if (id == "small-data-2p5d" || id == "small-B-2p5d") {
    const auto cfg = configured(id, overrides, root / "run");
    auto s = initial_state(cfg);
    if (id == "small-B-2p5d") {
      const double ratio = knob(overrides, "b_ratio", 0.01);
      if (!(ratio > 0.0)) throw ConfigError("b_ratio must be positive");
      s.b *= ratio;
      recompute_v(s, cfg.params.eps);
      d["b_ratio"] = ratio;
    }
    opts.initial = s;
    const auto r = run(cfg, opts);
    finish_single(r);
  } else if (id == "freq-split-3d") {
    const auto cfg = configured(id, overrides, root / "full");
    const double rho = knob(overrides, "split_rho", 2.5);
    if (!(rho > 0.0)) throw ConfigError("split_rho must be positive");
    const auto s0 = initial_state(cfg);
    const double above = next_shell(s0.grid(), rho);
    auto low = [&](const SpectralVector& f) { return band_filter(f, 0.0, rho); };
    auto high = [&](const SpectralVector& f) { return band_filter(f, above, INFINITY); };
    const double recomb = std::hypot(l2_norm(low(s0.u) + high(s0.u) - s0.u), l2_norm(low(s0.b) + high(s0.b) - s0.b)) /
                          pair_l2(s0);
    opts.keep_states = true;
    const auto full = run(cfg, opts);

    // high part of the full solution
    std::vector<double> hp;
    for (const auto& st : full.states) hp.push_back(std::hypot(l2_norm(high(st.u)), l2_norm(high(st.b))));
    bool high_monotone = true;
    double worst_rise = 0.0;
    for (std::size_t i = 2; i < hp.size(); ++i) {
      const double rise = hp[i] - hp[i - 1];
      worst_rise = std::max(worst_rise, rise / hp[0]);
      if (rise > cfg.tol_uptick * hp[0]) high_monotone = false;
    }

    // the two pieces as initial data of their own
    State sl{low(s0.u), low(s0.b), s0.v, 0.0};
    State sh{high(s0.u), high(s0.b), s0.v, 0.0};
    recompute_v(sl, cfg.params.eps);
    recompute_v(sh, cfg.params.eps);
    auto cl = cfg, ch = cfg;
    cl.out = (root / "low").string();
    ch.out = (root / "high").string();
    RunOptions ol, oh;
    ol.write_files = oh.write_files = write_files;
    ol.initial = sl;
    oh.initial = sh;
    const auto rl = run(cl, ol);
    const auto rh = run(ch, oh);

    d["split_rho"] = rho;
    d["recombination_residual"] = recomb;
    d["high_part_l2"] = hp;
    d["high_part_max_rise"] = worst_rise;
    d["high_part_nonincreasing"] = high_monotone;
    d["full"] = run_json(full);
    d["low"] = run_json(rl);
    d["high"] = run_json(rh);
    rep.pass = recomb <= 1e-13 && high_monotone && full.pass() && rl.pass() && rh.pass();
    rep.exit_code = full.exit_code == kExitNumeric || rl.exit_code == kExitNumeric || rh.exit_code == kExitNumeric
                        ? kExitNumeric
                        : (rep.pass ? kExitPass : kExitMonitor);
  } else if (id == "weak-strong-3d") {
    auto ca = configured(id, overrides, root / "reference");
    auto cb = ca;
    cb.out = (root / "perturbed").string();
    const double eps_p = knob(overrides, "perturb", 1e-6);
    const auto s0 = initial_state(ca);
    auto s1 = s0;
    const auto idx = s1.grid().index_of(1, 0, 0);
    s1.u[1][std::size_t(idx)] += eps_p;
    recompute_v(s1, ca.params.eps);
    opts.keep_states = true;
    const auto ra = run(ca, opts);
    RunOptions ob = opts;
    ob.initial = s1;
    const auto rb = run(cb, ob);
    d["perturb"] = eps_p;
    d["reference"] = run_json(ra);
    d["perturbed"] = run_json(rb);
    if (ra.exit_code == kExitNumeric || rb.exit_code == kExitNumeric) {
      rep.exit_code = kExitNumeric;
      rep.pass = false;
    } else {
      const auto ws = weakstrong_monitor(ra.states, rb.states, ca.params);
      d["c_fit"] = ws.c_fit;
      d["max_delta"] = ws.max_delta;
      d["bound_holds"] = ws.bound_holds;
      auto& tr = d["deltas"];
      tr = nlohmann::ordered_json::array();
      for (const auto& x : ws.deltas) {
        tr.push_back({{"t", x.t}, {"du", x.du}, {"db", x.db}, {"dv", x.dv}, {"gronwall_rhs", x.gronwall_rhs}});
      }
      rep.pass = eps_p == 0.0 ? ws.max_delta <= 1e-13 : (ws.bound_holds && std::isfinite(ws.c_fit));
      rep.exit_code = rep.pass ? kExitPass : kExitMonitor;
    }
  } else if (id == "threshold-bisect") {
    const auto cfg = configured(id, overrides, root / "bisect");
    const int iters = int(knob(overrides, "bisect_iters", 8));
    if (iters < 0) throw ConfigError("bisect_iters must be nonnegative");
    const auto b = monotonicity_threshold(cfg, cfg.initial.amplitude, 1.0, iters);
    d["threshold"] = b.threshold;
    d["failing"] = b.failing;
    d["runs"] = b.runs;
    auto& h = d["history"];
    h = nlohmann::ordered_json::array();
    for (const auto& [a, ok] : b.history) h.push_back({{"amplitude", a}, {"monotone", ok}});
    if (b.threshold > 0.0) {
      auto c = cfg;
      c.initial.amplitude = b.threshold;
      const auto s = initial_state(c);
      const auto v = s.v ? *s.v : s.u;
      const double size = hs_norm(s.u, 0.5) + hs_norm(s.b, 0.5) + hs_norm(v, 0.5);
      d["threshold_h12_size"] = size;
      d["threshold_over_mu"] = size / std::min(c.params.mu, c.params.nu);
    }
    rep.pass = b.threshold > 0.0 && std::isfinite(b.failing);
    rep.exit_code = rep.pass ? kExitPass : kExitMonitor;
  }

  if (write_files) {
    fs::create_directories(root);
    nlohmann::ordered_json j;
    j["preset"] = id;
    j["statement"] = rep.statement;
    j["pass"] = rep.pass;
    j["exit_code"] = rep.exit_code;
    j["detail"] = d;
    std::ofstream(root / "report.json", std::ios::trunc) << j.dump(2) << '\n';
  }
  return rep;
}

BisectionResult bisect_amplitude(const std::function<bool(double)>& passes, double lo, double hi, int iters) {
  if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("bisection needs 0 < lo < hi");
  BisectionResult r;
  auto eval = [&](double a) {
    const bool ok = passes(a);
    ++r.runs;
    r.history.emplace_back(a, ok);
    return ok;
  };
  int widen = 0;
  while (!eval(lo)) {
    hi = lo;
    lo *= 0.25;
    if (++widen > 12) {
      r.threshold = 0.0;
      r.failing = hi;
      return r;
    }
  }
  widen = 0;
  while (eval(hi)) {
    lo = hi;
    hi *= 4.0;
    if (++widen > 8) {
      r.threshold = lo;
      r.failing = INFINITY;
      return r;
    }
  }
  for (int i = 0; i < iters; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (eval(mid)) lo = mid;
    else hi = mid;
  }
  r.threshold = lo;
  r.failing = hi;
  return r;
}

bool monotone_at(const RunConfig& base, double amplitude) {
  auto cfg = base;
  cfg.initial.amplitude = amplitude;
  cfg.budgets = false;
  cfg.decay_fraction = 0.0;
  const auto s = initial_state(cfg);
  const double lim = stable_dt(s, cfg.params, cfg.hall_cfl);
  cfg.dt = std::min(base.dt, 0.5 * lim);
  // data this far past the stable step is far past any threshold too
  if (cfg.dt < base.dt / 64.0) return false;
  RunOptions o;
  o.write_files = false;
  const auto r = run(cfg, o);
  return r.exit_code != kExitNumeric && r.monotonicity.nonincreasing && r.monotonicity.integrated_holds;
}

BisectionResult monotonicity_threshold(const RunConfig& base, double lo, double hi, int iters) {
  return bisect_amplitude([&](double a) { return monotone_at(base, a); }, lo, hi, iters);
}

}  // namespace hallmhd
