#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pilotwave {

// Physics or input validation failure; the CLI maps this to exit code 1.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller violated a usage precondition; the CLI maps this to exit code 2.
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentGeometry {
  int n_slits = 1;
  double slit_width_a = 2e-5;      // m
  double slit_separation = 0.0;    // m, center to center; required when n_slits > 1
  double screen_distance_D = 5.0;  // m
  double geometry_factor = 1.0;    // dimensionless multiplier in the y -> theta map

  // Throws validation_error on violated invariants.
  void validate() const;
};

struct BeamThermo {
  double beta_E0 = 0.5;  // dimensionless coupling beta * E0
  std::optional<double> E0;           // J
  std::optional<double> beta_thermo;  // 1/J

  // Throws validation_error on hard violations; returns non-fatal warnings.
  std::vector<std::string> validate() const;
};

struct WaveKinematics {
  double k0 = 0.0;             // rest wave number, 1/m
  double omega0 = 0.0;         // rest angular frequency, rad/s; must equal c * k0
  double velocity_beta = 0.0;  // v/c, in (-1, 1)
  double gamma = 1.0;          // Lorentz factor; must equal (1 - beta^2)^(-1/2)

  // Builds a consistent record from the two free parameters.
  static WaveKinematics from_k0_beta(double k0, double velocity_beta);

  void validate() const;
};

enum class Normalization { raw, peak_unity };
enum class CurveKind { radiation_intensity, sed_probability };

struct PatternCurve {
  std::vector<double> positions_y;  // m, strictly increasing
  std::vector<double> thetas;       // dimensionless phase coordinate
  std::vector<double> values;       // >= 0
  Normalization normalization = Normalization::raw;
  CurveKind kind = CurveKind::radiation_intensity;

  void validate() const;
  std::size_t size() const { return values.size(); }
};

const char* to_string(Normalization n);
const char* to_string(CurveKind k);

}  // namespace pilotwave
