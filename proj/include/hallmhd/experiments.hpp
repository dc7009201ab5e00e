#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hallmhd/runner.hpp"

namespace hallmhd {

struct ExperimentReport {
  std::string id;
  std::string statement;
  bool pass = false;
  int exit_code = kExitMonitor;
  nlohmann::ordered_json detail;
};

/// Preset ids, in documentation order.
const std::vector<std::string>& preset_ids();
/// One-line description of what the preset exercises.
std::string preset_statement(const std::string& id);
/// Base run configuration of a preset (its first sub-run); ConfigError for unknown ids.
RunConfig preset_config(const std::string& id);

/// Key/value overrides are applied to every sub-run after the preset's own
/// settings; `out` is the report directory (sub-runs go below it). Extra
/// preset knobs: `perturb` (weak-strong-3d), `split_rho` (freq-split-3d),
/// `b_ratio` (small-B-2p5d), `bisect_iters` (threshold-bisect).
ExperimentReport run_experiment(const std::string& id, const std::map<std::string, std::string>& overrides,
                                const std::string& out, bool write_files = true);

struct BisectionResult {
  double threshold = 0.0;  // largest passing amplitude found
  double failing = 0.0;    // smallest failing amplitude found
  int runs = 0;
  std::vector<std::pair<double, bool>> history;
};

/// Bisects the initial amplitude between a passing and a failing value of
/// `passes`; the bracket is widened geometrically first.
BisectionResult bisect_amplitude(const std::function<bool(double)>& passes, double lo, double hi, int iters);

/// Runs `base` at `amplitude` with dt capped at half the initial stability
/// limit; true when the monotonicity monitor holds and the run completes.
bool monotone_at(const RunConfig& base, double amplitude);

/// Bisected amplitude threshold of the monotonicity monitor.
BisectionResult monotonicity_threshold(const RunConfig& base, double lo, double hi, int iters);

}  // namespace hallmhd
