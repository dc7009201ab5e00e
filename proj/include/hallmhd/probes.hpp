#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hallmhd/field.hpp"

namespace hallmhd {

/// Sampled LHS / RHS ratios of an inequality with its constant stripped.
struct ProbeReport {
  std::string id;
  int samples = 0;
  int skipped = 0;
  double max_ratio = 0.0;
  int n = 0;
  std::vector<double> ratios;

  /// Rows (inequality_id, sample_index, ratio), then a summary row whose
  /// sample_index is "max".
  void write_csv(std::ostream& os) const;
};

struct ProbeConfig {
  int n = 32;
  int samples = 100;
  std::uint64_t seed = 1;
  /// Per-mode amplitude ~ |k|^-slope; steep spectra keep ratios resolution stable.
  double slope = 4.0;
  /// Band is [1, n * band_fraction].
  double band_fraction = 0.25;
  /// Use cos(x1 + phase) with a random phase instead of a broadband field.
  bool single_mode = false;
};

/// Registered ids:
///   em       3D  |f|_L6 / |f|_H1
///   gn1      2D  |f|_L4 / (|f|_L2^(1/2) |grad f|_L2^(1/2))
///   gn2      3D  |f|_Linf / (|f|_H1^(1/2) |f|_H2^(1/2))
///   product  3D  |ab|_L2 / (|a|_H(1/2) |b|_H1)
std::vector<std::string> probe_ids();
int probe_dim(const std::string& id);

/// Ratio for one sample; nullopt when the denominator vanishes. `b` is only
/// read by the product probe (defaults to `a`).
std::optional<double> probe_ratio(const std::string& id, const SpectralScalar& a, const SpectralScalar* b = nullptr);

ProbeReport inequality_probe(const std::string& id, const ProbeConfig& cfg);

struct KatoPonceExponents {
  double s = 1.0;
  double p = 2.0;
  double p1 = 4.0, p2 = 4.0, p3 = 4.0, p4 = 4.0;
};

struct KatoPonceRatios {
  std::optional<double> commutator;
  std::optional<double> product;
};

/// Both displayed inequalities for mean-free scalar f, g.
KatoPonceRatios kato_ponce_ratios(const SpectralScalar& f, const SpectralScalar& g, const KatoPonceExponents& e);

struct KatoPonceReport {
  ProbeReport commutator;
  ProbeReport product;
};

/// Random 3D scalar pairs; f = g when `symmetric`.
KatoPonceReport kato_ponce_probe(const KatoPonceExponents& e, const ProbeConfig& cfg, bool symmetric = false);

}  // namespace hallmhd
