#pragma once

#include <string>
#include <vector>

#include "pilotwave/core_model.hpp"
#include "pilotwave/types.hpp"

namespace pilotwave {

enum class Weighting { uniform, poisson };

struct FitConfig {
  double width_scale_lo = 0.8;
  double width_scale_hi = 1.2;  // bounds must contain 1
  double tolerance = 1e-6;      // width-scale convergence tolerance
  Weighting weighting = Weighting::poisson;
  double total_counts = 1e6;    // Poisson weighting only
  int bins = 201;               // odd, >= 11
  double theta_range = 2.0 * 3.14159265358979323846;  // fitted half-window

  void validate() const;
};

const char* to_string(Weighting w);

struct Chi2Breakdown {
  double chi2_total = 0.0;             // index-order sum of chi2_per_bin
  std::vector<double> chi2_per_bin;
};

// Weighted squared residual between `data` and a peak-unity radiation model
// whose slit width is scaled by width_scale (the interference phase is set by
// the slit separation and does not scale). `data` must be peak-normalized and
// sampled consistently with the geometry's y -> theta map.
Chi2Breakdown chi2_objective(const PatternCurve& data, double width_scale,
                             const ExperimentGeometry& g, double k_pilot,
                             const FitConfig& cfg);

struct FitReport {
  double width_scale = 1.0;
  double width_reduction_percent = 0.0;  // 100 * (1 - width_scale)
  double chi2_total = 0.0;
  std::vector<double> chi2_per_bin;
  std::vector<double> bin_center_theta;
  long optimizer_evaluations = 0;
  FitConfig config_echo;
};

// Minimizes chi2 over the width scale: a deterministic coarse scan picks a
// bracket (erroring out if the best point sits on a bound), Brent refines it.
FitReport fit_width(const PatternCurve& data, const ExperimentGeometry& g,
                    double k_pilot, const FitConfig& cfg);

std::string to_json_string(const FitReport& report);

struct ResidualCurve {
  std::vector<double> positions_y;
  std::vector<double> thetas;
  std::vector<double> residuals;  // model - data at the fitted width
};

struct DistinguishabilityReport {
  FitReport fit;
  double chi2_pre_fit = 0.0;             // objective at width_scale = 1
  double max_abs_residual_pre_fit = 0.0;
  double max_abs_residual_at_fit = 0.0;
  ResidualCurve residual_curve;
};

// Generates the trapping curve for the given configuration, fits the
// radiation model's width to it, and reports how much of the deviation the
// width adjustment absorbs.
DistinguishabilityReport distinguishability_report(const ExperimentGeometry& g,
                                                   const BeamThermo& thermo,
                                                   double k_pilot,
                                                   const FitConfig& cfg);

}  // namespace pilotwave
