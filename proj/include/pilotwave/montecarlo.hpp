#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pilotwave/types.hpp"

namespace pilotwave {

namespace rng {

// Counter-mode splitmix64: value i of the stream seeded with `seed`.
// Identical to the i-th output of the sequential generator, but any index is
// addressable directly, which keeps worker partitioning off the stream state.
std::uint64_t mix_at(std::uint64_t seed, std::uint64_t index);

// Unit-rate exponential variate for particle `index`: -log(u) with
// u = ((mix >> 11) + 0.5) * 2^-53, strictly inside (0, 1).
double exp_variate_at(std::uint64_t seed, std::uint64_t index);

}  // namespace rng

struct EnsembleConfig {
  long long n_particles = 1'000'000;  // >= 10^4
  std::uint64_t seed = 42;
  int n_position_bins = 201;          // must match the profile grid
  BeamThermo thermo;
  PatternCurve well_depth_profile;    // peak-unity; depth_j = E0 * values[j]
  int n_workers = 1;

  void validate() const;
};

struct TrapHistogram {
  std::vector<double> bin_center_y;
  std::vector<double> bin_center_theta;
  std::vector<std::uint64_t> trapped_counts;
  std::vector<double> normalized;  // counts / max count (zeros if no traps)
};

// Draws one dimensionless thermal energy per particle and tests it against
// every bin's well depth. Counts are integer partial sums over contiguous
// particle ranges, so results are bit-identical for any worker count.
TrapHistogram sample_trapping(const EnsembleConfig& cfg);

struct OracleReport {
  TrapHistogram histogram;
  double expect_beta_e0 = 0.0;
  std::vector<double> expected_counts;  // n * (1 - exp(-beta_e0 * depth_j))
  std::vector<double> z_scores;
  double max_abs_z = 0.0;
  bool pass = false;  // max |z| < 4
};

// Compares the sampled histogram against the closed-form expectation; the
// overload without expect_beta_e0 checks self-consistency with cfg.thermo.
OracleReport oracle_report(const EnsembleConfig& cfg);
OracleReport oracle_report(const EnsembleConfig& cfg, double expect_beta_e0);

// Columns: bin_center_y,bin_center_theta,trapped_count,normalized_value,
// expected_value,z_score. Locale-independent shortest round-trip doubles.
std::string to_csv(const OracleReport& report);

std::string to_json_string(const OracleReport& report);

}  // namespace pilotwave
