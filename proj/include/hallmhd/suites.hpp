#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hallmhd {

/// One checked quantity: pass iff value <= threshold (or the stated boolean).
struct SuiteLine {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct SuiteReport {
  std::string id;
  std::vector<SuiteLine> lines;
  bool pass() const;
  nlohmann::ordered_json to_json() const;
};

/// curl^-1 curl, Leray idempotence and symmetry, curl adjointness and the
/// gradient/curl norm identity on 3D fields; the 2.5D identities (I1, triple
/// product, double curl) on 2D lattices. Worst relative residual over `count`
/// seeded fields per line.
SuiteReport identity_suite_report(int n = 32, int count = 200, std::uint64_t seed = 1, double tol = 1e-11);

/// Hall cancellation on `count` random divergence-free pairs, undealiased product.
SuiteReport cancellation_suite(int n = 32, int count = 100, std::uint64_t seed = 1, double tol = 1e-12);

struct ProbeSuiteOptions {
  int n_coarse = 32;
  int n_fine = 64;
  int samples = 100;
  /// Kato-Ponce samples: each one costs about ten transforms on the 2x grid
  int kato_ponce_samples = 40;
  int interpolation_samples = 500;
  std::uint64_t seed = 1;
  /// maximal ratios at the two resolutions must agree within this factor
  double stability = 2.0;
};

/// Interpolation on random samples, embedding/GN/Kato-Ponce ratio stability
/// across resolutions, and the Gronwall verifier on closed-form traces.
SuiteReport probe_suite(const ProbeSuiteOptions& opt = {});

}  // namespace hallmhd
