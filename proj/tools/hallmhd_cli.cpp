// hallmhd: run, experiment, check, inspect.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hallmhd/errors.hpp"
#include "hallmhd/experiments.hpp"
#include "hallmhd/operators.hpp"
#include "hallmhd/runner.hpp"
#include "hallmhd/snapshot.hpp"
#include "hallmhd/sobolev.hpp"
#include "hallmhd/suites.hpp"

using namespace hallmhd;

namespace {

struct Common {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<double> dt, t_end;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "random seed of the initial data");
  app->add_option("--n", c.n, "grid points per direction");
  app->add_option("--dt", c.dt, "time step");
  app->add_option("--t-end", c.t_end, "final time");
  app->add_option("--set", c.sets, "extra key=value override (repeatable)");
}

std::map<std::string, std::string> overrides(const Common& c) {
  std::map<std::string, std::string> m;
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    m[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (c.seed) m["seed"] = std::to_string(*c.seed);
  if (c.n) m["n"] = std::to_string(*c.n);
  if (c.dt) m["dt"] = format_double(*c.dt);
  if (c.t_end) m["t_end"] = format_double(*c.t_end);
  return m;
}

void print_monitors(const RunResult& r) {
  for (const auto& m : r.monitors) {
    std::printf("  %-18s %-4s %s value=%s threshold=%s\n", m.name.c_str(), m.pass ? "ok" : "FAIL",
                m.asserted ? "asserted" : "reported", format_double(m.value).c_str(),
                format_double(m.threshold).c_str());
  }
  if (r.fitted) {
    std::printf("  fitted constants: electron_velocity=%s magnetic_h1=%s vorticity=%s\n",
                format_double(r.fitted->c_v).c_str(), format_double(r.fitted->c_h1).c_str(),
                format_double(r.fitted->c_omega).c_str());
  }
}

int cmd_run(const std::string& config_path, const Common& c) {
  auto cfg = config_path.empty() ? RunConfig{} : RunConfig::load(config_path);
  for (const auto& [k, v] : overrides(c)) cfg.set(k, v);
  if (!c.out.empty()) cfg.out = c.out;
  const auto r = run(cfg);
  std::printf("run: %ld steps to t=%s, exit %d\n", r.steps, format_double(r.final_state ? r.final_state->t : 0.0).c_str(),
              r.exit_code);
  if (!r.error.empty()) std::printf("  error: %s\n", r.error.c_str());
  print_monitors(r);
  std::printf("  output in %s\n", cfg.out.c_str());
  return r.exit_code;
}

int cmd_experiment(const std::string& preset, bool list, const Common& c) {
  if (list || preset.empty()) {
    for (const auto& id : preset_ids()) std::printf("%-18s %s\n", id.c_str(), preset_statement(id).c_str());
    return preset.empty() && !list ? kExitConfig : kExitPass;
  }
  const std::string out = c.out.empty() ? "out/" + preset : c.out;
  const auto rep = run_experiment(preset, overrides(c), out, true);
  std::printf("%s: %s\n  %s\n  report in %s/report.json\n", rep.id.c_str(), rep.pass ? "PASS" : "FAIL",
              rep.statement.c_str(), out.c_str());
  return rep.exit_code;
}

int cmd_check(const std::string& suite, int n, std::uint64_t seed, const std::string& json_path) {
  std::vector<SuiteReport> reps;
  if (suite == "identities" || suite == "all") reps.push_back(identity_suite_report(n, 200, seed));
  if (suite == "cancellation" || suite == "all") reps.push_back(cancellation_suite(n, 100, seed));
  if (suite == "probes" || suite == "all") {
    ProbeSuiteOptions o;
    o.n_coarse = n;
    o.n_fine = 2 * n;
    o.seed = seed;
    reps.push_back(probe_suite(o));
  }
  if (reps.empty()) throw ConfigError("unknown suite '" + suite + "'");
  bool pass = true;
  nlohmann::ordered_json all = nlohmann::ordered_json::array();
  for (const auto& r : reps) {
    std::printf("[%s] %s\n", r.id.c_str(), r.pass() ? "PASS" : "FAIL");
    for (const auto& l : r.lines) {
      std::printf("  %-44s %-4s %s (<= %s)\n", l.name.c_str(), l.pass ? "ok" : "FAIL", format_double(l.value).c_str(),
                  format_double(l.threshold).c_str());
    }
    pass = pass && r.pass();
    all.push_back(r.to_json());
  }
  if (!json_path.empty()) std::ofstream(json_path, std::ios::trunc) << all.dump(2) << '\n';
  return pass ? kExitPass : kExitMonitor;
}

int cmd_inspect(const std::string& path) {
  const auto h = read_snapshot_header(path);
  std::printf("%s\n  version %u, %s, n = %u, %u components, t = %s\n  crc %08x %s\n", path.c_str(), h.version,
              h.dimension == 2 ? "2.5D" : "3D", h.n, h.components, format_double(h.t).c_str(), h.crc,
              h.crc_ok ? "ok" : "MISMATCH");
  if (!h.crc_ok) return kExitConfig;
  const auto s = read_snapshot(path);
  std::printf("  |u|_L2 = %s  |B|_L2 = %s\n  |u|_H1/2 = %s  |B|_H1/2 = %s\n", format_double(l2_norm(s.u)).c_str(),
              format_double(l2_norm(s.b)).c_str(), format_double(hs_norm(s.u, 0.5)).c_str(),
              format_double(hs_norm(s.b, 0.5)).c_str());
  if (s.v) std::printf("  |v|_L2 = %s  |v|_H1/2 = %s\n", format_double(l2_norm(*s.v)).c_str(),
                       format_double(hs_norm(*s.v, 0.5)).c_str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hall-MHD pseudo-spectral solver and diagnostics"};
  app.require_subcommand(1);

  Common run_c, exp_c;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "integrate one configuration");
  run_cmd->add_option("--config", config_path, "key = value configuration file");
  add_common(run_cmd, run_c);

  std::string preset;
  bool list = false;
  auto* exp_cmd = app.add_subcommand("experiment", "run a named preset");
  exp_cmd->add_option("--preset", preset, "preset id");
  exp_cmd->add_flag("--list", list, "list presets");
  add_common(exp_cmd, exp_c);

  std::string suite = "all", json_path;
  int check_n = 32;
  std::uint64_t check_seed = 1;
  auto* check_cmd = app.add_subcommand("check", "identity, cancellation and inequality suites");
  check_cmd->add_option("--suite", suite, "identities | cancellation | probes | all");
  check_cmd->add_option("--n", check_n, "grid points per direction");
  check_cmd->add_option("--seed", check_seed, "random seed");
  check_cmd->add_option("--json", json_path, "write the report as JSON");

  std::string snap;
  auto* inspect_cmd = app.add_subcommand("inspect", "print a snapshot header and norms");
  inspect_cmd->add_option("snapshot", snap, "snapshot file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, run_c);
    if (*exp_cmd) return cmd_experiment(preset, list, exp_c);
    if (*check_cmd) return cmd_check(suite, check_n, check_seed, json_path);
    if (*inspect_cmd) return cmd_inspect(snap);
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const CflError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitConfig;
}
