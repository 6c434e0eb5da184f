#include "pilotwave/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>

#include <json.hpp>

#include "pilotwave/kernels.hpp"

namespace pilotwave {

namespace {

constexpr double kWeightFloor = 1e-6;  // Poisson weight guard near nodes

struct BrentResult {
  double x;
  double fx;
};

// Brent's derivative-free minimizer on [a, b]; f must be continuous.
BrentResult brent_minimize(const std::function<double(double)>& f, double a,
                           double b, double xtol) {
  constexpr double gold = 0.3819660112501051;
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon());
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double m = 0.5 * (a + b);
    const double tol = eps * std::fabs(x) + xtol;
    const double tol2 = 2.0 * tol;
    if (std::fabs(x - m) <= tol2 - 0.5 * (b - a)) break;
    double p = 0.0, q = 0.0, r = 0.0;
    if (std::fabs(e) > tol) {
      r = (x - w) * (fx - fv);
      q = (x - v) * (fx - fw);
      p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0)
        p = -p;
      else
        q = -q;
      r = e;
      e = d;
    }
    if (std::fabs(p) < std::fabs(0.5 * q * r) && p > q * (a - x) &&
        p < q * (b - x)) {
      d = p / q;
      const double u = x + d;
      if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol : -tol;
    } else {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    const double u = (std::fabs(d) >= tol) ? x + d : x + ((d > 0.0) ? tol : -tol);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x)
        b = x;
      else
        a = x;
      v = w;
      fv = fw;
      w = x;
      fw = fx;
      x = u;
      fx = fu;
    } else {
      if (u < x)
        a = u;
      else
        b = u;
      if (fu <= fw || w == x) {
        v = w;
        fv = fw;
        w = u;
        fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u;
        fv = fu;
      }
    }
  }
  return {x, fx};
}

// Peak-unity radiation model on the data grid with the envelope phase scaled.
void scaled_model(const PatternCurve& data, double width_scale,
                  const ExperimentGeometry& g, double k_pilot,
                  std::vector<double>& model) {
  const std::size_t n = data.size();
  model.resize(n);
  const auto& K = kern::active();
  std::vector<double> th(n);
  for (std::size_t i = 0; i < n; ++i) th[i] = width_scale * data.thetas[i];
  if (g.n_slits > 1) {
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i)
      phi[i] = phi_of_y(data.positions_y[i], g, k_pilot);
    K.grating_grid(th.data(), phi.data(), g.n_slits, model.data(), n);
  } else {
    K.envelope_grid(th.data(), model.data(), n);
  }
  const double mmax = K.max_value(model.data(), n);
  if (!(mmax > 0.0))
    throw validation_error("pattern has no support on this grid");
  for (double& v : model) v /= mmax;
}

void check_grid(const PatternCurve& data, const ExperimentGeometry& g,
                double k_pilot) {
  data.validate();
  if (data.normalization != Normalization::peak_unity)
    throw validation_error("fit data must be peak-normalized");
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double th = theta_of_y(data.positions_y[i], g, k_pilot);
    const double scale = std::max({std::fabs(th), std::fabs(data.thetas[i]), 1e-300});
    if (std::fabs(th - data.thetas[i]) > 1e-9 * scale)
      throw validation_error("grid mismatch between data and geometry");
  }
}

Chi2Breakdown chi2_of_model(const std::vector<double>& model,
                            const PatternCurve& data, const FitConfig& cfg) {
  const std::size_t n = model.size();
  std::vector<double> w(n);
  if (cfg.weighting == Weighting::uniform) {
    std::fill(w.begin(), w.end(), 1.0);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      w[i] = cfg.total_counts / std::max(model[i], kWeightFloor);
  }
  Chi2Breakdown out;
  out.chi2_per_bin.resize(n);
  kern::active().weighted_sq_residual(model.data(), data.values.data(), w.data(),
                                      out.chi2_per_bin.data(), n);
  double total = 0.0;
  for (double v : out.chi2_per_bin) total += v;
  out.chi2_total = total;
  return out;
}

}  // namespace

void FitConfig::validate() const {
  if (!(width_scale_lo < width_scale_hi))
    throw validation_error("width-scale bounds must be ordered");
  if (width_scale_lo > 1.0 || width_scale_hi < 1.0)
    throw validation_error("width-scale bounds must contain 1");
  if (!(width_scale_lo > 0.0))
    throw validation_error("width-scale bounds must be positive");
  if (!(tolerance > 0.0)) throw validation_error("tolerance must be positive");
  if (bins < 11 || bins % 2 == 0)
    throw validation_error("bins must be odd and at least 11");
  if (!(theta_range > 0.0))
    throw validation_error("theta_range must be positive");
  if (weighting == Weighting::poisson && !(total_counts > 0.0))
    throw validation_error("total_counts must be positive");
}

const char* to_string(Weighting w) {
  return w == Weighting::uniform ? "uniform" : "poisson";
}

Chi2Breakdown chi2_objective(const PatternCurve& data, double width_scale,
                             const ExperimentGeometry& g, double k_pilot,
                             const FitConfig& cfg) {
  cfg.validate();
  g.validate();
  check_grid(data, g, k_pilot);
  if (!(width_scale > 0.0))
    throw validation_error("width scale must be positive");
  std::vector<double> model;
  scaled_model(data, width_scale, g, k_pilot, model);
  return chi2_of_model(model, data, cfg);
}

FitReport fit_width(const PatternCurve& data, const ExperimentGeometry& g,
                    double k_pilot, const FitConfig& cfg) {
  cfg.validate();
  g.validate();
  check_grid(data, g, k_pilot);

  long evals = 0;
  std::vector<double> model;
  const auto objective = [&](double s) {
    ++evals;
    scaled_model(data, s, g, k_pilot, model);
    return chi2_of_model(model, data, cfg).chi2_total;
  };

  // Deterministic coarse scan; the best point must be interior so Brent gets
  // a true bracket.
  constexpr int scan_points = 101;
  const double lo = cfg.width_scale_lo, hi = cfg.width_scale_hi;
  double best_f = std::numeric_limits<double>::infinity();
  int best_i = -1;
  double xs[scan_points];
  for (int i = 0; i < scan_points; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / (scan_points - 1);
    const double f = objective(xs[i]);
    if (f < best_f) {
      best_f = f;
      best_i = i;
    }
  }
  if (best_i == 0 || best_i == scan_points - 1)
    throw validation_error("bracket exhausted");

  const BrentResult refined =
      brent_minimize(objective, xs[best_i - 1], xs[best_i + 1], cfg.tolerance);
  const double s = (refined.fx <= best_f) ? refined.x : xs[best_i];

  FitReport report;
  report.width_scale = s;
  report.width_reduction_percent = 100.0 * (1.0 - s);
  ++evals;
  scaled_model(data, s, g, k_pilot, model);
  Chi2Breakdown final_chi2 = chi2_of_model(model, data, cfg);
  report.chi2_total = final_chi2.chi2_total;
  report.chi2_per_bin = std::move(final_chi2.chi2_per_bin);
  report.bin_center_theta = data.thetas;
  report.optimizer_evaluations = evals;
  report.config_echo = cfg;
  return report;
}

std::string to_json_string(const FitReport& r) {
  nlohmann::json j;
  j["width_scale"] = r.width_scale;
  j["width_reduction_percent"] = r.width_reduction_percent;
  j["chi2_total"] = r.chi2_total;
  j["chi2_per_bin"] = r.chi2_per_bin;
  j["bin_center_theta"] = r.bin_center_theta;
  j["optimizer_evaluations"] = r.optimizer_evaluations;
  j["config_echo"] = {
      {"width_scale_bounds", {r.config_echo.width_scale_lo, r.config_echo.width_scale_hi}},
      {"tolerance", r.config_echo.tolerance},
      {"weighting", to_string(r.config_echo.weighting)},
      {"total_counts", r.config_echo.total_counts},
      {"bins", r.config_echo.bins},
      {"theta_range", r.config_echo.theta_range},
  };
  return j.dump(2) + "\n";
}

DistinguishabilityReport distinguishability_report(const ExperimentGeometry& g,
                                                   const BeamThermo& thermo,
                                                   double k_pilot,
                                                   const FitConfig& cfg) {
  cfg.validate();
  const GridSpec grid{cfg.theta_range, cfg.bins};
  const PatternPair pattern = generate_pattern(g, thermo, k_pilot, grid);
  const PatternCurve& data = pattern.sed;

  DistinguishabilityReport out;
  out.chi2_pre_fit = chi2_objective(data, 1.0, g, k_pilot, cfg).chi2_total;
  double pre = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    pre = std::max(pre, std::fabs(pattern.radiation.values[i] - data.values[i]));
  out.max_abs_residual_pre_fit = pre;

  out.fit = fit_width(data, g, k_pilot, cfg);

  std::vector<double> model;
  scaled_model(data, out.fit.width_scale, g, k_pilot, model);
  out.residual_curve.positions_y = data.positions_y;
  out.residual_curve.thetas = data.thetas;
  out.residual_curve.residuals.resize(data.size());
  double post = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double r = model[i] - data.values[i];
    out.residual_curve.residuals[i] = r;
    post = std::max(post, std::fabs(r));
  }
  out.max_abs_residual_at_fit = post;
  return out;
}

}  // namespace pilotwave
