#pragma once

#include <numbers>

namespace abcage {

// Energies are angular frequencies in rad/us, times are in us.
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz; }
constexpr double angular_to_mhz(double rad_per_us) { return rad_per_us / kTwoPi; }

}  // namespace abcage
