#include "pilotwave/core_model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pilotwave/constants.hpp"
#include "pilotwave/kernels.hpp"
#include "point_math.hpp"

namespace pilotwave {

namespace {

bool near_rel(double a, double b, double tol) {
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tol * std::max(scale, 1e-300);
}

void require_positive_k(double k_pilot) {
  if (!(k_pilot > 0.0) || !std::isfinite(k_pilot))
    throw validation_error("pilot wave number must be positive");
}

}  // namespace

void ExperimentGeometry::validate() const {
  if (n_slits < 1) throw validation_error("n_slits must be at least 1");
  if (!(slit_width_a > 0.0) || !std::isfinite(slit_width_a))
    throw validation_error("slit width must be positive");
  if (!(screen_distance_D > 0.0) || !std::isfinite(screen_distance_D))
    throw validation_error("screen distance must be positive");
  if (!(geometry_factor > 0.0) || !std::isfinite(geometry_factor))
    throw validation_error("geometry factor must be positive");
  if (n_slits > 1) {
    if (!(slit_separation > 0.0) || !std::isfinite(slit_separation))
      throw validation_error("slit separation required for multi-slit geometry");
    if (!(slit_separation > slit_width_a))
      throw validation_error("slit separation must exceed the slit width");
  }
}

std::vector<std::string> BeamThermo::validate() const {
  if (!std::isfinite(beta_E0) || beta_E0 < 0.0 || beta_E0 > 1.0)
    throw validation_error("beta_E0 out of range [0, 1]");
  if (E0.has_value() && !(*E0 > 0.0))
    throw validation_error("E0 must be positive");
  if (beta_thermo.has_value() && !(*beta_thermo > 0.0))
    throw validation_error("beta_thermo must be positive");
  if (E0.has_value() && beta_thermo.has_value()) {
    const double product = *beta_thermo * *E0;
    if (!near_rel(product, beta_E0, 1e-12))
      throw validation_error("inconsistent thermodynamic coupling");
  }
  std::vector<std::string> warnings;
  if (beta_E0 > 0.5)
    warnings.push_back(
        "beta_E0 exceeds 1/2; the weak-coupling regime no longer applies");
  return warnings;
}

WaveKinematics WaveKinematics::from_k0_beta(double k0, double velocity_beta) {
  WaveKinematics kin;
  kin.k0 = k0;
  kin.velocity_beta = velocity_beta;
  kin.omega0 = constants::speed_of_light * k0;
  kin.gamma = 1.0 / std::sqrt(1.0 - velocity_beta * velocity_beta);
  kin.validate();
  return kin;
}

void WaveKinematics::validate() const {
  if (!(k0 > 0.0) || !std::isfinite(k0))
    throw validation_error("k0 must be positive");
  if (!std::isfinite(velocity_beta) || std::fabs(velocity_beta) >= 1.0)
    throw validation_error("velocity_beta must lie in (-1, 1)");
  if (!near_rel(omega0, constants::speed_of_light * k0, 1e-12))
    throw validation_error("omega0 must equal c * k0");
  const double g = 1.0 / std::sqrt(1.0 - velocity_beta * velocity_beta);
  if (!near_rel(gamma, g, 1e-12))
    throw validation_error("gamma inconsistent with velocity_beta");
}

void PatternCurve::validate() const {
  const std::size_t n = values.size();
  if (n == 0 || positions_y.size() != n || thetas.size() != n)
    throw validation_error("pattern arrays must be non-empty and equally sized");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(positions_y[i]) || !std::isfinite(thetas[i]))
      throw validation_error("invalid position");
    if (!std::isfinite(values[i]) || values[i] < 0.0)
      throw validation_error("pattern values must be finite and nonnegative");
    if (i > 0 && !(positions_y[i] > positions_y[i - 1]))
      throw validation_error("positions must be strictly increasing");
  }
  if (normalization == Normalization::peak_unity) {
    double m = values[0];
    for (double v : values) m = std::max(m, v);
    if (std::fabs(m - 1.0) > 1e-12)
      throw validation_error("peak-unity curve must have maximum 1");
  }
}

const char* to_string(Normalization n) {
  return n == Normalization::raw ? "raw" : "peak-unity";
}

const char* to_string(CurveKind k) {
  return k == CurveKind::radiation_intensity ? "radiation-intensity"
                                             : "sed-probability";
}

double theta_of_y(double y, const ExperimentGeometry& g, double k_pilot) {
  if (!std::isfinite(y)) throw validation_error("invalid position");
  return g.geometry_factor * k_pilot *
         (2.0 * g.slit_width_a / g.screen_distance_D) * y;
}

double phi_of_y(double y, const ExperimentGeometry& g, double k_pilot) {
  if (!std::isfinite(y)) throw validation_error("invalid position");
  return g.geometry_factor * k_pilot *
         (g.slit_separation / g.screen_distance_D) * y;
}

double single_slit_intensity(double theta) { return detail::envelope(theta); }

double multi_slit_intensity(double theta, double phi, int n_slits) {
  if (n_slits < 1) throw validation_error("n_slits must be at least 1");
  return detail::grating(theta, phi, n_slits);
}

double well_occupancy(double beta_times_d, const BeamThermo& thermo) {
  if (!(beta_times_d >= 0.0))
    throw validation_error("well depth must be nonnegative");
  if (thermo.beta_E0 == 0.0)
    throw validation_error("degenerate thermodynamic coupling");
  return -std::expm1(-beta_times_d) / thermo.beta_E0;
}

double sed_probability(double intensity, const BeamThermo& thermo) {
  if (!std::isfinite(intensity) || intensity < 0.0 || intensity > 1.0)
    throw validation_error("intensity must be peak-normalized");
  return detail::sed_transform(intensity, thermo.beta_E0);
}

double standing_wave(double x, double t, const WaveKinematics& kin) {
  return 2.0 * std::cos(kin.k0 * x) * std::sin(kin.omega0 * t);
}

WaveFactors modulated_wave_factors(double x, double t,
                                   const WaveKinematics& kin) {
  const double c = constants::speed_of_light;
  const double carrier =
      std::cos(kin.k0 * kin.gamma * (x - c * kin.velocity_beta * t));
  const double modulation =
      std::sin(kin.omega0 * kin.gamma * (t - kin.velocity_beta * x / c));
  return {carrier, modulation};
}

double modulated_wave(double x, double t, const WaveKinematics& kin) {
  const WaveFactors f = modulated_wave_factors(x, t, kin);
  return 2.0 * f.carrier * f.modulation;
}

DeBroglieResult de_broglie(const WaveKinematics& kin) {
  kin.validate();
  if (kin.velocity_beta == 0.0)
    throw validation_error("de Broglie wavelength undefined at rest");
  const double wave_vector = kin.gamma * std::fabs(kin.velocity_beta) * kin.k0;
  return {wave_vector, 1.0 / wave_vector, constants::hbar * wave_vector};
}

void GridSpec::validate() const {
  if (!(theta_half_width > 0.0) || !std::isfinite(theta_half_width))
    throw validation_error("theta_half_width must be positive");
  if (points < 2) throw validation_error("grid needs at least 2 points");
}

std::vector<double> make_position_grid(const ExperimentGeometry& g,
                                       double k_pilot, const GridSpec& grid) {
  g.validate();
  grid.validate();
  require_positive_k(k_pilot);
  const double scale =
      g.geometry_factor * k_pilot * (2.0 * g.slit_width_a / g.screen_distance_D);
  const double y_max = grid.theta_half_width / scale;
  std::vector<double> ys(static_cast<std::size_t>(grid.points));
  const double step = 2.0 * y_max / static_cast<double>(grid.points - 1);
  for (int i = 0; i < grid.points; ++i)
    ys[static_cast<std::size_t>(i)] = -y_max + step * i;
  return ys;
}

PatternPair generate_pattern(const ExperimentGeometry& g,
                             const BeamThermo& thermo, double k_pilot,
                             std::span<const double> positions_y) {
  g.validate();
  thermo.validate();
  require_positive_k(k_pilot);
  const std::size_t n = positions_y.size();
  if (n == 0) throw validation_error("position grid must be non-empty");

  std::vector<double> ys(positions_y.begin(), positions_y.end());
  std::vector<double> thetas(n), phis;
  for (std::size_t i = 0; i < n; ++i) {
    thetas[i] = theta_of_y(ys[i], g, k_pilot);
    if (i > 0 && !(ys[i] > ys[i - 1]))
      throw validation_error("positions must be strictly increasing");
  }
  const auto& K = kern::active();

  std::vector<double> rad(n);
  if (g.n_slits > 1) {
    phis.resize(n);
    for (std::size_t i = 0; i < n; ++i) phis[i] = phi_of_y(ys[i], g, k_pilot);
    K.grating_grid(thetas.data(), phis.data(), g.n_slits, rad.data(), n);
  } else {
    K.envelope_grid(thetas.data(), rad.data(), n);
  }

  const double rad_max = K.max_value(rad.data(), n);
  if (!(rad_max > 0.0))
    throw validation_error("pattern has no support on this grid");
  for (double& v : rad) v /= rad_max;

  std::vector<double> sed(n);
  if (thermo.beta_E0 == 0.0) {
    // Linearized limit: the trapping curve degenerates to the intensity shape.
    sed = rad;
  } else {
    K.sed_transform_grid(rad.data(), thermo.beta_E0, sed.data(), n);
    const double sed_max = K.max_value(sed.data(), n);
    for (double& v : sed) v /= sed_max;
  }

  PatternPair out;
  out.radiation = PatternCurve{ys, thetas, std::move(rad),
                               Normalization::peak_unity,
                               CurveKind::radiation_intensity};
  out.sed = PatternCurve{std::move(ys), std::move(thetas), std::move(sed),
                         Normalization::peak_unity, CurveKind::sed_probability};
  return out;
}

PatternPair generate_pattern(const ExperimentGeometry& g,
                             const BeamThermo& thermo, double k_pilot,
                             const GridSpec& grid) {
  const std::vector<double> ys = make_position_grid(g, k_pilot, grid);
  return generate_pattern(g, thermo, k_pilot, ys);
}

BlockedSlitPrediction predict_blocked_slit(const ExperimentGeometry& g,
                                           const BeamThermo& thermo,
                                           double k_pilot,
                                           const GridSpec& grid) {
  if (g.n_slits != 2)
    throw precondition_error(
        "blocked-slit prediction requires a two-slit geometry");
  const std::vector<double> ys = make_position_grid(g, k_pilot, grid);
  const PatternPair two = generate_pattern(g, thermo, k_pilot, ys);

  ExperimentGeometry single = g;
  single.n_slits = 1;
  single.slit_separation = 0.0;
  const PatternPair one = generate_pattern(single, thermo, k_pilot, ys);

  BlockedSlitPrediction out;
  out.sed_prediction = two.sed;
  out.sed_prediction.normalization = Normalization::raw;
  for (double& v : out.sed_prediction.values) v *= 0.5;
  out.orthodox_prediction = one.sed;
  out.orthodox_prediction.normalization = Normalization::raw;
  for (double& v : out.orthodox_prediction.values) v *= 0.5;
  return out;
}

}  // namespace pilotwave
