#include "pilotwave/estimates.hpp"

#include <cmath>

namespace pilotwave {

void CoherenceInputs::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(bandwidth_hz))
    throw validation_error("bandwidth must be positive");
  if (!positive(source_distance_R))
    throw validation_error("source distance must be positive");
  if (!positive(wavelength))
    throw validation_error("wavelength must be positive");
  if (!positive(source_area_S))
    throw validation_error("source area must be positive");
  if (!positive(c)) throw validation_error("speed of light must be positive");
}

double coherence_length(const CoherenceInputs& in) {
  in.validate();
  return in.c / in.bandwidth_hz;
}

CoherenceAreaResult coherence_width(const CoherenceInputs& in) {
  in.validate();
  const double rl = in.source_distance_R * in.wavelength;
  const double area = rl * rl / in.source_area_S;
  return {area, std::sqrt(area)};
}

double spin_population_ratio(double delta_E, double beta_thermo) {
  if (!std::isfinite(delta_E) || delta_E < 0.0)
    throw validation_error("level splitting must be nonnegative");
  if (!std::isfinite(beta_thermo) || beta_thermo < 0.0)
    throw validation_error("inverse temperature must be nonnegative");
  return std::exp(-beta_thermo * delta_E);
}

}  // namespace pilotwave
