#include <doctest.h>

#include <cmath>

#include "pilotwave/constants.hpp"
#include "pilotwave/estimates.hpp"

using namespace pilotwave;

namespace {

CoherenceInputs astral_inputs() {
  CoherenceInputs in;
  in.bandwidth_hz = 2.998e8;
  in.source_distance_R = 1e9 * constants::lightyear;
  in.wavelength = 5e-12;
  in.source_area_S = 1e-20;
  return in;
}

}  // namespace

TEST_CASE("coherence length is c over bandwidth") {
  CoherenceInputs in = astral_inputs();
  CHECK(coherence_length(in) == doctest::Approx(1.0).epsilon(1e-12));
  in.bandwidth_hz = 1.0;
  CHECK(coherence_length(in) == doctest::Approx(2.998e8).epsilon(1e-12));
  in.bandwidth_hz = 2.0;
  CHECK(coherence_length(in) == doctest::Approx(1.499e8).epsilon(1e-12));
}

TEST_CASE("coherence area and width match the frozen astrophysical scales") {
  const CoherenceInputs in = astral_inputs();
  const CoherenceAreaResult r = coherence_width(in);
  // R = 10^9 lightyears, lambda = 5 pm, S = 10^-20 m^2
  CHECK(r.area == doctest::Approx(2.237763e47).epsilon(0.01));
  CHECK(r.width == doctest::Approx(4.7305e23).epsilon(0.01));

  CoherenceInputs big = in;
  big.source_area_S = 1e8;  // a macroscopic source shrinks the width
  CHECK(coherence_width(big).width == doctest::Approx(4.7305e9).epsilon(0.01));
}

TEST_CASE("coherence width scales as R lambda over sqrt(S)") {
  CoherenceInputs in = astral_inputs();
  const double base = coherence_width(in).width;
  in.source_distance_R *= 3.0;
  CHECK(coherence_width(in).width == doctest::Approx(3.0 * base).epsilon(1e-12));
  in.source_distance_R /= 3.0;
  in.wavelength *= 2.0;
  CHECK(coherence_width(in).width == doctest::Approx(2.0 * base).epsilon(1e-12));
  in.wavelength /= 2.0;
  in.source_area_S *= 100.0;
  CHECK(coherence_width(in).width == doctest::Approx(base / 10.0).epsilon(1e-12));
}

TEST_CASE("coherence inputs must be strictly positive") {
  CoherenceInputs in = astral_inputs();
  in.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(coherence_length(in), validation_error);
  in = astral_inputs();
  in.source_area_S = -1.0;
  CHECK_THROWS_AS(coherence_width(in), validation_error);
  in = astral_inputs();
  in.wavelength = 0.0;
  CHECK_THROWS_AS(coherence_width(in), validation_error);
}

TEST_CASE("spin population ratio follows the Boltzmann factor") {
  CHECK(spin_population_ratio(0.0, 1e20) == 1.0);
  CHECK(spin_population_ratio(10.0, 1.0) ==
        doctest::Approx(4.539993e-5).epsilon(1e-6));
  // tiny splitting: ratio = 1 - beta dE to first order
  CHECK(spin_population_ratio(1e-8, 1.0) ==
        doctest::Approx(1.0 - 1e-8).epsilon(1e-12));
  double prev = 2.0;
  for (double de : {0.0, 0.1, 1.0, 5.0, 30.0}) {
    const double r = spin_population_ratio(de, 1.0);
    CHECK(r <= 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_AS(spin_population_ratio(-1.0, 1.0), validation_error);
  CHECK_THROWS_AS(spin_population_ratio(1.0, -1.0), validation_error);
}

TEST_CASE("electron rest scales pin the kinematic constants") {
  // omega0 = m c^2 / hbar and k0 = omega0 / c for the electron
  const double omega0 = constants::electron_mass * constants::speed_of_light *
                        constants::speed_of_light / constants::hbar;
  const double k0 = omega0 / constants::speed_of_light;
  CHECK(omega0 == doctest::Approx(7.763297e20).epsilon(1e-6));
  CHECK(k0 == doctest::Approx(2.589492e12).epsilon(1e-6));
}
