#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <json.hpp>

#include "pilotwave/constants.hpp"
#include "pilotwave/fitting.hpp"

using namespace pilotwave;

namespace {

constexpr double kPi = constants::pi;
constexpr double kPilot = 2.0 * kPi / 2e-9;

BeamThermo thermo_of(double beta_e0) {
  BeamThermo t;
  t.beta_E0 = beta_e0;
  return t;
}

ExperimentGeometry default_geometry(int n_slits = 1) {
  ExperimentGeometry g;
  g.n_slits = n_slits;
  if (n_slits > 1) g.slit_separation = 4.0 * g.slit_width_a;
  return g;
}

PatternPair pattern_for(double beta_e0, int n_slits, const FitConfig& cfg) {
  const ExperimentGeometry g = default_geometry(n_slits);
  return generate_pattern(g, thermo_of(beta_e0), kPilot,
                          GridSpec{cfg.theta_range, cfg.bins});
}

}  // namespace

TEST_CASE("fitting a curve against itself gives zero residual at scale 1") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  for (Weighting w : {Weighting::uniform, Weighting::poisson}) {
    FitConfig c = cfg;
    c.weighting = w;
    const Chi2Breakdown b = chi2_objective(p.radiation, 1.0, g, kPilot, c);
    CHECK(b.chi2_total <= 1e-18);
    CHECK(b.chi2_per_bin.size() == static_cast<std::size_t>(cfg.bins));
  }
}

TEST_CASE("chi2 total equals the index-order sum of the per-bin terms") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  const Chi2Breakdown b = chi2_objective(p.sed, 0.97, g, kPilot, cfg);
  double sum = 0.0;
  for (double v : b.chi2_per_bin) sum += v;
  CHECK(std::fabs(sum - b.chi2_total) <=
        1e-9 * std::max(1.0, std::fabs(b.chi2_total)));
}

TEST_CASE("uniform-weight deviations concentrate in the flanks") {
  FitConfig cfg;
  cfg.weighting = Weighting::uniform;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  const Chi2Breakdown b = chi2_objective(p.sed, 1.0, g, kPilot, cfg);
  const std::size_t center = b.chi2_per_bin.size() / 2;
  const std::size_t peak_bin = static_cast<std::size_t>(
      std::max_element(b.chi2_per_bin.begin(), b.chi2_per_bin.end()) -
      b.chi2_per_bin.begin());
  CHECK(peak_bin != center);
  CHECK(b.chi2_per_bin[center] <= 1e-12);
  // symmetric grid, symmetric pattern
  CHECK(b.chi2_per_bin[peak_bin] ==
        doctest::Approx(b.chi2_per_bin[b.chi2_per_bin.size() - 1 - peak_bin])
            .epsilon(1e-9));
}

TEST_CASE("grid mismatch between data and geometry is rejected") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  PatternPair p = pattern_for(0.5, 1, cfg);
  ExperimentGeometry other = g;
  other.slit_width_a *= 2.0;
  CHECK_THROWS_WITH_AS(chi2_objective(p.sed, 1.0, other, kPilot, cfg),
                       "grid mismatch between data and geometry",
                       validation_error);
  PatternCurve raw = p.sed;
  raw.normalization = Normalization::raw;
  CHECK_THROWS_AS(chi2_objective(raw, 1.0, g, kPilot, cfg), validation_error);
}

TEST_CASE("default fit reproduces the frozen half-coupling width reduction") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  const FitReport r = fit_width(p.sed, g, kPilot, cfg);
  // frozen reference: width_scale 0.986729651, chi2 4.293808665e5 against a
  // pre-fit 5.600636595e5 under the default configuration
  CHECK(r.width_scale == doctest::Approx(0.986729651).epsilon(2e-6));
  CHECK(r.width_reduction_percent == doctest::Approx(1.327035).epsilon(2e-4));
  CHECK(r.chi2_total == doctest::Approx(4.293808665e5).epsilon(1e-5));
  CHECK(chi2_objective(p.sed, 1.0, g, kPilot, cfg).chi2_total ==
        doctest::Approx(5.600636595e5).epsilon(1e-6));
  CHECK(r.optimizer_evaluations > 100);
  CHECK(r.chi2_total < 5.600636595e5);
}

TEST_CASE("fifth-coupling fit reproduces its frozen reduction") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.2, 1, cfg);
  const FitReport r = fit_width(p.sed, g, kPilot, cfg);
  CHECK(r.width_scale == doctest::Approx(0.992704957).epsilon(2e-6));
  CHECK(r.width_reduction_percent == doctest::Approx(0.729504).epsilon(2e-4));
}

TEST_CASE("reduction grows with the coupling strength") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  double prev = 0.0;
  for (double b : {0.05, 0.2, 0.5, 1.0}) {
    const PatternPair p = pattern_for(b, 1, cfg);
    const FitReport r = fit_width(p.sed, g, kPilot, cfg);
    CHECK(r.width_reduction_percent > prev);
    CHECK(r.width_scale < 1.0);
    prev = r.width_reduction_percent;
  }
}

TEST_CASE("multislit fits only narrow the envelope") {
  const FitConfig cfg;
  for (int n : {2, 5}) {
    const ExperimentGeometry g = default_geometry(n);
    const PatternPair p = pattern_for(0.5, n, cfg);
    const FitReport r = fit_width(p.sed, g, kPilot, cfg);
    const double frozen = (n == 2) ? 0.986893725 : 0.987753781;
    CHECK(r.width_scale == doctest::Approx(frozen).epsilon(2e-6));
    CHECK(r.chi2_total <
          chi2_objective(p.sed, 1.0, g, kPilot, cfg).chi2_total);
  }
}

TEST_CASE("bounds that exclude the optimum raise bracket exhausted") {
  FitConfig cfg;
  cfg.width_scale_lo = 0.999;
  cfg.width_scale_hi = 1.2;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  CHECK_THROWS_WITH_AS(fit_width(p.sed, g, kPilot, cfg), "bracket exhausted",
                       validation_error);
}

TEST_CASE("config validation rejects malformed fits") {
  FitConfig cfg;
  cfg.width_scale_lo = 1.05;  // bounds exclude 1
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg = FitConfig{};
  cfg.bins = 200;  // even
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg = FitConfig{};
  cfg.bins = 9;  // too few
  CHECK_THROWS_AS(cfg.validate(), validation_error);
  cfg = FitConfig{};
  cfg.tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), validation_error);
}

TEST_CASE("distinguishability report keeps residuals ordered") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const DistinguishabilityReport rep =
      distinguishability_report(g, thermo_of(0.5), kPilot, cfg);
  // frozen residual anchors for the default configuration
  CHECK(rep.max_abs_residual_pre_fit ==
        doctest::Approx(6.226856919e-2).epsilon(1e-6));
  CHECK(rep.max_abs_residual_at_fit ==
        doctest::Approx(5.224196850e-2).epsilon(1e-5));
  CHECK(rep.fit.chi2_total < rep.chi2_pre_fit);
  CHECK(rep.max_abs_residual_at_fit < rep.max_abs_residual_pre_fit);
  CHECK(rep.residual_curve.residuals.size() ==
        static_cast<std::size_t>(cfg.bins));
}

TEST_CASE("multislit residuals stay below the single-slit unfitted level") {
  const FitConfig cfg;
  const DistinguishabilityReport single =
      distinguishability_report(default_geometry(), thermo_of(0.5), kPilot, cfg);
  for (int n : {2, 5}) {
    const DistinguishabilityReport multi = distinguishability_report(
        default_geometry(n), thermo_of(0.5), kPilot, cfg);
    CHECK(multi.fit.chi2_total > 0.0);
    CHECK(multi.fit.chi2_total < single.chi2_pre_fit);
    CHECK(multi.max_abs_residual_at_fit < single.max_abs_residual_pre_fit);
  }
}

TEST_CASE("fit results are bitwise reproducible") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  const FitReport a = fit_width(p.sed, g, kPilot, cfg);
  const FitReport b = fit_width(p.sed, g, kPilot, cfg);
  CHECK(std::memcmp(&a.width_scale, &b.width_scale, sizeof(double)) == 0);
  CHECK(std::memcmp(&a.chi2_total, &b.chi2_total, sizeof(double)) == 0);
  CHECK(a.chi2_per_bin == b.chi2_per_bin);
  CHECK(a.optimizer_evaluations == b.optimizer_evaluations);
  CHECK(to_json_string(a) == to_json_string(b));
}

TEST_CASE("fit report serializes every contract field") {
  const FitConfig cfg;
  const ExperimentGeometry g = default_geometry();
  const PatternPair p = pattern_for(0.5, 1, cfg);
  const FitReport r = fit_width(p.sed, g, kPilot, cfg);
  const nlohmann::json j = nlohmann::json::parse(to_json_string(r));
  for (const char* key :
       {"width_scale", "width_reduction_percent", "chi2_total", "chi2_per_bin",
        "bin_center_theta", "optimizer_evaluations", "config_echo"})
    CHECK(j.contains(key));
  CHECK(j["chi2_per_bin"].size() == j["bin_center_theta"].size());
  CHECK(j["config_echo"]["weighting"] == "poisson");
  CHECK(j["config_echo"]["bins"] == cfg.bins);
  CHECK(j["config_echo"]["width_scale_bounds"][0] == cfg.width_scale_lo);
  CHECK(j["width_scale"].get<double>() == r.width_scale);
}
