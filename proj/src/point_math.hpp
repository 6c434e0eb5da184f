#pragma once

#include <cmath>

#include "pilotwave/constants.hpp"

// Shared pointwise math: the scalar kernels and the public point functions
// must evaluate identical expressions so grid and point paths never drift.
namespace pilotwave::detail {

inline constexpr double singular_eps = 1e-8;

inline double envelope(double theta) {
  if (std::fabs(theta) < singular_eps) return 1.0;
  const double s = std::sin(theta) / theta;
  const double v = s * s;
  return v > 1.0 ? 1.0 : v;
}

// sin^2(n phi) / (n sin phi)^2 with removable singularities at phi = m*pi.
inline double interference(double phi, int n_slits) {
  if (n_slits == 1) return 1.0;
  const double m = std::round(phi / constants::pi);
  const double delta = phi - m * constants::pi;
  if (std::fabs(delta) < singular_eps) return 1.0;
  const double sn = std::sin(n_slits * phi);
  const double sd = static_cast<double>(n_slits) * std::sin(phi);
  const double r = sn / sd;
  const double v = r * r;
  return v > 1.0 ? 1.0 : v;
}

inline double grating(double theta, double phi, int n_slits) {
  return envelope(theta) * interference(phi, n_slits);
}

inline double sed_transform(double intensity, double beta_e0) {
  return -std::expm1(-beta_e0 * intensity);
}

}  // namespace pilotwave::detail
