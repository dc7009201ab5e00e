#include "hallmhd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hallmhd/diagnostics.hpp"
#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end || !std::isfinite(x)) {
    throw ConfigError("config key '" + key + "': not a finite number: '" + v + "'");
  }
  return x;
}

long long to_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, x);
  if (r.ec != std::errc() || r.ptr != end) throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
  return s;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "dimension",  "formulation", "n",          "mu",          "nu",           "eps",
      "dt",         "t_end",       "sample_every", "hall_cfl",  "init",         "amplitude",
      "band_lo",    "band_hi",     "slope",      "seed",        "filter",       "filter_lo",
      "filter_hi",  "out",         "snapshot_times", "budgets", "assert_monotone", "decay_fraction",
      "tol_energy", "tol_uptick",  "tol_budget", "tol_e",       "tol_cancellation", "tol_redundancy"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const auto v = trim(raw);
  if (key == "dimension") {
    if (v != "3" && v != "2.5") throw ConfigError("dimension must be 3 or 2.5, got '" + v + "'");
    dimension = v;
  } else if (key == "formulation") {
    if (v == "physical") formulation = Formulation::Physical;
    else if (v == "extended") formulation = Formulation::Extended;
    else throw ConfigError("formulation must be physical or extended, got '" + v + "'");
  } else if (key == "n") {
    n = int(to_int(key, v));
  } else if (key == "mu") {
    params.mu = to_double(key, v);
  } else if (key == "nu") {
    params.nu = to_double(key, v);
  } else if (key == "eps") {
    params.eps = to_double(key, v);
  } else if (key == "dt") {
    dt = to_double(key, v);
  } else if (key == "t_end") {
    t_end = to_double(key, v);
  } else if (key == "sample_every") {
    sample_every = int(to_int(key, v));
  } else if (key == "hall_cfl") {
    hall_cfl = to_double(key, v);
  } else if (key == "init") {
    initial.kind = v;
  } else if (key == "amplitude") {
    initial.amplitude = to_double(key, v);
  } else if (key == "band_lo") {
    initial.lo = to_double(key, v);
  } else if (key == "band_hi") {
    initial.hi = to_double(key, v);
  } else if (key == "slope") {
    initial.slope = to_double(key, v);
  } else if (key == "seed") {
    const auto s = to_int(key, v);
    if (s < 0) throw ConfigError("seed must be nonnegative");
    initial.seed = std::uint64_t(s);
  } else if (key == "filter") {
    if (v != "none" && v != "ball" && v != "annulus") throw ConfigError("filter must be none, ball or annulus");
    filter = v;
  } else if (key == "filter_lo") {
    filter_lo = to_double(key, v);
  } else if (key == "filter_hi") {
    filter_hi = to_double(key, v);
  } else if (key == "out") {
    if (v.empty()) throw ConfigError("out must not be empty");
    out = v;
  } else if (key == "snapshot_times") {
    snapshot_times.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) snapshot_times.push_back(to_double(key, item));
    }
  } else if (key == "budgets") {
    budgets = to_bool(key, v);
  } else if (key == "assert_monotone") {
    assert_monotone = to_bool(key, v);
  } else if (key == "decay_fraction") {
    decay_fraction = to_double(key, v);
  } else if (key == "tol_energy") {
    tol_energy = to_double(key, v);
  } else if (key == "tol_uptick") {
    tol_uptick = to_double(key, v);
  } else if (key == "tol_budget") {
    tol_budget = to_double(key, v);
  } else if (key == "tol_e") {
    tol_e = to_double(key, v);
  } else if (key == "tol_cancellation") {
    tol_cancellation = to_double(key, v);
  } else if (key == "tol_redundancy") {
    tol_redundancy = to_double(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void RunConfig::validate() const {
  params.validate();
  if (n < 8 || n % 2 != 0) throw ConfigError("n must be even and at least 8");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_end >= 0.0)) throw ConfigError("t_end must be nonnegative");
  if (sample_every < 1) throw ConfigError("sample_every must be at least 1");
  if (!(hall_cfl > 0.0 && hall_cfl <= 1.0)) throw ConfigError("hall_cfl must lie in (0, 1]");
  if (formulation == Formulation::Extended && params.mu != params.nu) {
    throw ConfigError("extended formulation requires mu = nu");
  }
  if (filter == "annulus" && !(filter_lo <= filter_hi)) throw ConfigError("annulus needs filter_lo <= filter_hi");
  if (filter != "none" && !(filter_hi >= 0.0)) throw ConfigError("filter_hi must be nonnegative");
  for (double t : snapshot_times)
    if (t < 0.0 || t > t_end) throw ConfigError("snapshot time outside [0, t_end]");
  for (double tol : {tol_energy, tol_uptick, tol_budget, tol_e, tol_cancellation, tol_redundancy})
    if (!(tol > 0.0)) throw ConfigError("tolerances must be positive");
  if (decay_fraction < 0.0) throw ConfigError("decay_fraction must be nonnegative");
}

RunConfig RunConfig::parse(const std::string& text) { return parse(text, RunConfig{}); }
RunConfig RunConfig::load(const std::string& path) { return load(path, RunConfig{}); }

RunConfig RunConfig::parse(const std::string& text, RunConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

RunConfig RunConfig::load(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), std::move(base));
}

std::map<std::string, std::string> RunConfig::to_map() const {
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  return {
      {"dimension", dimension},
      {"formulation", formulation == Formulation::Extended ? "extended" : "physical"},
      {"n", std::to_string(n)},
      {"mu", format_double(params.mu)},
      {"nu", format_double(params.nu)},
      {"eps", format_double(params.eps)},
      {"dt", format_double(dt)},
      {"t_end", format_double(t_end)},
      {"sample_every", std::to_string(sample_every)},
      {"hall_cfl", format_double(hall_cfl)},
      {"init", initial.kind},
      {"amplitude", format_double(initial.amplitude)},
      {"band_lo", format_double(initial.lo)},
      {"band_hi", format_double(initial.hi)},
      {"slope", format_double(initial.slope)},
      {"seed", std::to_string(initial.seed)},
      {"filter", filter},
      {"filter_lo", format_double(filter_lo)},
      {"filter_hi", format_double(filter_hi)},
      {"out", out},
      {"snapshot_times", join(snapshot_times)},
      {"budgets", b(budgets)},
      {"assert_monotone", b(assert_monotone)},
      {"decay_fraction", format_double(decay_fraction)},
      {"tol_energy", format_double(tol_energy)},
      {"tol_uptick", format_double(tol_uptick)},
      {"tol_budget", format_double(tol_budget)},
      {"tol_e", format_double(tol_e)},
      {"tol_cancellation", format_double(tol_cancellation)},
      {"tol_redundancy", format_double(tol_redundancy)},
  };
}

std::string RunConfig::to_text() const {
  const auto m = to_map();
  std::string s;
  for (const auto& k : config_keys()) s += k + " = " + m.at(k) + "\n";
  return s;
}

}  // namespace hallmhd
