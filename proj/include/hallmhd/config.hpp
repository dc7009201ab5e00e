#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hallmhd/initial.hpp"
#include "hallmhd/mhd3d.hpp"

namespace hallmhd {

/// Flat key = value configuration. Keys and defaults are listed in the README.
struct RunConfig {
  std::string dimension = "3";  // "3" or "2.5"
  Formulation formulation = Formulation::Extended;
  int n = 32;
  PhysicalParams params{1.0, 1.0, 1.0};
  double dt = 1e-3;
  double t_end = 1.0;
  int sample_every = 10;
  double hall_cfl = 0.25;
  InitialSpec initial;
  /// none | ball | annulus; ball keeps |k| <= filter_hi, annulus filter_lo <= |k| <= filter_hi
  std::string filter = "none";
  double filter_lo = 0.0;
  double filter_hi = 0.0;
  std::string out = "out";
  std::vector<double> snapshot_times;
  /// Lambda^s budgets at s = 1/2 and s = 1 (3D extended runs only).
  bool budgets = true;
  bool assert_monotone = true;
  /// Decay monitor asserts final/initial <= decay_fraction when set (> 0).
  double decay_fraction = 0.0;

  double tol_energy = 1e-6;
  double tol_uptick = 1e-8;
  double tol_budget = 1e-5;
  double tol_e = 1e-5;
  double tol_cancellation = 1e-12;
  double tol_redundancy = 1e-8;

  int grid_dim() const { return dimension == "2.5" ? 2 : 3; }

  /// Sets one key from its text form; ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Checks cross-field constraints; ConfigError on violation.
  void validate() const;
  /// Parses `key = value` lines; '#' starts a comment.
  static RunConfig parse(const std::string& text, RunConfig base);
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path, RunConfig base);
  static RunConfig load(const std::string& path);
  /// Round-trips through parse().
  std::string to_text() const;
  std::map<std::string, std::string> to_map() const;
};

/// Keys accepted by RunConfig::set, in documentation order.
const std::vector<std::string>& config_keys();

}  // namespace hallmhd
