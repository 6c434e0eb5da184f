#include "pilotwave/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include <json.hpp>

#include "format_detail.hpp"
#include "pilotwave/kernels.hpp"

namespace pilotwave {

namespace rng {

std::uint64_t mix_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double exp_variate_at(std::uint64_t seed, std::uint64_t index) {
  const double u =
      (static_cast<double>(mix_at(seed, index) >> 11) + 0.5) * 0x1.0p-53;
  return -std::log(u);
}

}  // namespace rng

void EnsembleConfig::validate() const {
  if (n_particles < 10'000)
    throw validation_error("n_particles must be at least 10^4");
  if (n_position_bins < 11)
    throw validation_error("need at least 11 position bins");
  if (n_workers < 1) throw validation_error("n_workers must be at least 1");
  thermo.validate();
  well_depth_profile.validate();
  if (well_depth_profile.normalization != Normalization::peak_unity)
    throw validation_error("well depth profile must be peak-normalized");
  if (static_cast<std::size_t>(n_position_bins) != well_depth_profile.size())
    throw validation_error("n_position_bins must match the profile grid");
}

namespace {

void count_range(const kern::Kernels& K, std::uint64_t seed, std::uint64_t i0,
                 std::uint64_t i1, const double* thresholds, std::size_t n_bins,
                 std::uint64_t* counts) {
  constexpr std::size_t block = 8192;
  std::vector<double> xs(block);
  for (std::uint64_t start = i0; start < i1; start += block) {
    const std::size_t len =
        static_cast<std::size_t>(std::min<std::uint64_t>(block, i1 - start));
    for (std::size_t k = 0; k < len; ++k)
      xs[k] = rng::exp_variate_at(seed, start + k);
    K.trap_count(xs.data(), len, thresholds, n_bins, counts);
  }
}

}  // namespace

TrapHistogram sample_trapping(const EnsembleConfig& cfg) {
  cfg.validate();
  const std::size_t m = cfg.well_depth_profile.size();
  std::vector<double> thresholds(m);
  for (std::size_t j = 0; j < m; ++j)
    thresholds[j] = cfg.thermo.beta_E0 * cfg.well_depth_profile.values[j];
  if (*std::max_element(thresholds.begin(), thresholds.end()) <= 0.0)
    throw validation_error("no trapping possible");

  const auto& K = kern::active();
  const std::uint64_t n = static_cast<std::uint64_t>(cfg.n_particles);
  const int workers = cfg.n_workers;

  std::vector<std::vector<std::uint64_t>> partial(
      static_cast<std::size_t>(workers), std::vector<std::uint64_t>(m, 0));
  if (workers == 1) {
    count_range(K, cfg.seed, 0, n, thresholds.data(), m, partial[0].data());
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::uint64_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t i0 = std::min<std::uint64_t>(n, chunk * w);
      const std::uint64_t i1 = std::min<std::uint64_t>(n, i0 + chunk);
      pool.emplace_back(count_range, std::cref(K), cfg.seed, i0, i1,
                        thresholds.data(), m, partial[static_cast<std::size_t>(w)].data());
    }
    for (auto& t : pool) t.join();
  }

  TrapHistogram h;
  h.bin_center_y = cfg.well_depth_profile.positions_y;
  h.bin_center_theta = cfg.well_depth_profile.thetas;
  h.trapped_counts.assign(m, 0);
  for (const auto& p : partial)
    for (std::size_t j = 0; j < m; ++j) h.trapped_counts[j] += p[j];

  const std::uint64_t cmax =
      *std::max_element(h.trapped_counts.begin(), h.trapped_counts.end());
  h.normalized.resize(m);
  for (std::size_t j = 0; j < m; ++j)
    h.normalized[j] =
        cmax == 0 ? 0.0
                  : static_cast<double>(h.trapped_counts[j]) /
                        static_cast<double>(cmax);
  return h;
}

OracleReport oracle_report(const EnsembleConfig& cfg) {
  return oracle_report(cfg, cfg.thermo.beta_E0);
}

OracleReport oracle_report(const EnsembleConfig& cfg, double expect_beta_e0) {
  if (!std::isfinite(expect_beta_e0) || expect_beta_e0 < 0.0)
    throw validation_error("expected beta_E0 must be nonnegative");
  OracleReport r;
  r.histogram = sample_trapping(cfg);
  r.expect_beta_e0 = expect_beta_e0;

  const std::size_t m = r.histogram.trapped_counts.size();
  const double n = static_cast<double>(cfg.n_particles);
  r.expected_counts.resize(m);
  r.z_scores.resize(m);
  double zmax = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double p =
        -std::expm1(-expect_beta_e0 * cfg.well_depth_profile.values[j]);
    const double expected = n * p;
    r.expected_counts[j] = expected;
    const double var = n * p * (1.0 - p);
    const double diff = static_cast<double>(r.histogram.trapped_counts[j]) - expected;
    double z;
    if (var > 0.0) {
      z = diff / std::sqrt(var);
    } else {
      // Degenerate bin: any deviation from the certain count is a failure.
      z = (diff == 0.0) ? 0.0
                        : std::copysign(std::numeric_limits<double>::infinity(),
                                        diff);
    }
    r.z_scores[j] = z;
    zmax = std::max(zmax, std::fabs(z));
  }
  r.max_abs_z = zmax;
  r.pass = zmax < 4.0;
  return r;
}

std::string to_csv(const OracleReport& report) {
  std::string out;
  out.reserve(64 * report.z_scores.size() + 80);
  out += "bin_center_y,bin_center_theta,trapped_count,normalized_value,"
         "expected_value,z_score\n";
  for (std::size_t j = 0; j < report.z_scores.size(); ++j) {
    detail::append_double(out, report.histogram.bin_center_y[j]);
    out += ',';
    detail::append_double(out, report.histogram.bin_center_theta[j]);
    out += ',';
    detail::append_u64(out, report.histogram.trapped_counts[j]);
    out += ',';
    detail::append_double(out, report.histogram.normalized[j]);
    out += ',';
    detail::append_double(out, report.expected_counts[j]);
    out += ',';
    detail::append_double(out, report.z_scores[j]);
    out += '\n';
  }
  return out;
}

std::string to_json_string(const OracleReport& report) {
  nlohmann::json j;
  j["bins"] = report.z_scores.size();
  j["expect_beta_e0"] = report.expect_beta_e0;
  j["max_abs_z"] = report.max_abs_z;
  j["pass"] = report.pass;
  std::uint64_t total = 0;
  for (std::uint64_t c : report.histogram.trapped_counts) total += c;
  j["total_trapped"] = total;
  return j.dump(2) + "\n";
}

}  // namespace pilotwave
