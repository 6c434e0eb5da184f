#pragma once

#include "pilotwave/constants.hpp"
#include "pilotwave/types.hpp"

namespace pilotwave {

struct CoherenceInputs {
  double bandwidth_hz = 0.0;       // spectral width of the source
  double source_distance_R = 0.0;  // m
  double wavelength = 0.0;         // m
  double source_area_S = 0.0;      // m^2
  double c = constants::speed_of_light;

  void validate() const;  // every field strictly positive
};

// Longitudinal coherence length c / bandwidth, m.
double coherence_length(const CoherenceInputs& in);

struct CoherenceAreaResult {
  double area;   // R^2 lambda^2 / S, m^2
  double width;  // sqrt(area), m
};

// Transverse coherence area subtended at distance R and its linear width.
CoherenceAreaResult coherence_width(const CoherenceInputs& in);

// Boltzmann occupation ratio exp(-beta * delta_E) between two levels split
// by delta_E at inverse temperature beta.
double spin_population_ratio(double delta_E, double beta_thermo);

}  // namespace pilotwave
