#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hallmhd/config.hpp"
#include "hallmhd/diagnostics.hpp"
#include "hallmhd/mhd25d.hpp"

namespace hallmhd {

enum ExitCode : int { kExitPass = 0, kExitMonitor = 1, kExitConfig = 2, kExitNumeric = 3 };

struct MonitorResult {
  std::string name;
  bool pass = true;
  /// false: reported only, does not decide the run's verdict
  bool asserted = true;
  double value = 0.0;
  double threshold = 0.0;
};

struct RunOptions {
  bool write_files = true;
  /// Keep the state at every sample (twin-run comparisons).
  bool keep_states = false;
  /// Start from this state instead of the configured initial data.
  std::optional<State> initial;
};

struct RunResult {
  RunConfig config;
  std::vector<DiagnosticsRecord> records;
  /// Y at samples and int_0^t D accumulated per step
  std::vector<double> triple, triple_dissipation;
  std::vector<MonitorResult> monitors;
  std::vector<State> states;
  std::optional<State> final_state;
  std::optional<Fitted25D> fitted;
  MonotonicityResult monotonicity;
  DecayResult decay;
  double max_energy_drift = 0.0;
  double max_budget_residual = 0.0;
  double max_e_residual = 0.0;
  double max_c_critical = 0.0;
  long steps = 0;
  int exit_code = kExitPass;
  std::string error;

  bool pass() const { return exit_code == kExitPass; }
  const MonitorResult* monitor(const std::string& name) const;
};

/// Configured initial data with the spectral filter applied.
State initial_state(const RunConfig& cfg);

/// Steps to t_end, sampling diagnostics. Config problems throw ConfigError
/// before any output is written; a numeric failure mid-run returns exit code
/// 3 after flushing the last good state to last_good.hmhd.
RunResult run(const RunConfig& cfg, const RunOptions& opts = {});

nlohmann::ordered_json summary_json(const RunResult& r);

}  // namespace hallmhd
