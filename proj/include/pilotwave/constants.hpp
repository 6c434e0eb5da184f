#pragma once

namespace pilotwave::constants {

// Values are pinned so serialized outputs stay stable; do not silently
// swap in CODATA refinements.
inline constexpr double speed_of_light = 2.998e8;       // m/s
inline constexpr double hbar = 1.0546e-34;              // J s
inline constexpr double electron_mass = 9.109e-31;      // kg
inline constexpr double lightyear = 9.461e15;           // m

inline constexpr double pi = 3.14159265358979323846;

}  // namespace pilotwave::constants
