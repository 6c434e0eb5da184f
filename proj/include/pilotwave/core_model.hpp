#pragma once

#include <span>
#include <vector>

#include "pilotwave/types.hpp"

namespace pilotwave {

// Phase coordinate of a screen position: geometry_factor * k_pilot * (2a/D) * y.
double theta_of_y(double y, const ExperimentGeometry& g, double k_pilot);

// Inter-slit phase: geometry_factor * k_pilot * (separation/D) * y.
double phi_of_y(double y, const ExperimentGeometry& g, double k_pilot);

// Single-slit envelope sin^2(theta)/theta^2 in [0, 1], limit 1 at theta = 0.
double single_slit_intensity(double theta);

// Envelope times the n-slit interference factor sin^2(n phi)/(n sin phi)^2.
double multi_slit_intensity(double theta, double phi, int n_slits);

// Mean trapped fraction of a thermal beam over a well of depth d:
// (1/beta_E0) * (1 - exp(-beta*d)), taking beta*d as one dimensionless input.
double well_occupancy(double beta_times_d, const BeamThermo& thermo);

// Trapping probability 1 - exp(-beta_E0 * intensity); intensity must be a
// peak-normalized value in [0, 1].
double sed_probability(double intensity, const BeamThermo& thermo);

// Rest-frame field 2 cos(k0 x) sin(omega0 t).
double standing_wave(double x, double t, const WaveKinematics& kin);

// Field seen from a frame moving at velocity_beta: both factors Doppler shift.
double modulated_wave(double x, double t, const WaveKinematics& kin);

struct WaveFactors {
  double carrier;     // cos(k0 gamma (x - c beta t))
  double modulation;  // sin(omega0 gamma (t - beta x / c)); at fixed t its
                      // zeros along x are spaced pi / (gamma beta k0)
};
WaveFactors modulated_wave_factors(double x, double t, const WaveKinematics& kin);

struct DeBroglieResult {
  double wave_vector;  // gamma * beta * k0, 1/m
  double wavelength;   // 1 / wave_vector, m (reciprocal convention, no 2 pi)
  double momentum;     // hbar * wave_vector, kg m/s
};
DeBroglieResult de_broglie(const WaveKinematics& kin);

struct GridSpec {
  double theta_half_width = 3.0 * 3.14159265358979323846;
  int points = 2001;

  void validate() const;
};

// Symmetric position grid whose theta coordinates span +-theta_half_width.
std::vector<double> make_position_grid(const ExperimentGeometry& g,
                                       double k_pilot, const GridSpec& grid);

struct PatternPair {
  PatternCurve radiation;  // peak-unity classical intensity
  PatternCurve sed;        // peak-unity trapping probability curve
};

PatternPair generate_pattern(const ExperimentGeometry& g, const BeamThermo& thermo,
                             double k_pilot, std::span<const double> positions_y);
PatternPair generate_pattern(const ExperimentGeometry& g, const BeamThermo& thermo,
                             double k_pilot, const GridSpec& grid);

struct BlockedSlitPrediction {
  // Both curves are raw-normalized halves of peak-unity patterns, so the two
  // models can be compared on one vertical scale.
  PatternCurve sed_prediction;       // half the unblocked two-slit pattern
  PatternCurve orthodox_prediction;  // single-slit shape at half height
};

BlockedSlitPrediction predict_blocked_slit(const ExperimentGeometry& g,
                                           const BeamThermo& thermo,
                                           double k_pilot, const GridSpec& grid);

}  // namespace pilotwave
