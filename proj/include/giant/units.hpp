#pragma once

#include <numbers>

// Internal units: time in microseconds, frequencies and rates in rad/us.
namespace giant::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// nu/2pi in MHz -> angular rad/us
constexpr double angular_from_mhz(double mhz) { return two_pi * mhz; }
constexpr double angular_from_ghz(double ghz) { return two_pi * 1.0e3 * ghz; }
constexpr double mhz_from_angular(double w) { return w / two_pi; }
constexpr double ghz_from_angular(double w) { return w / (two_pi * 1.0e3); }

}  // namespace giant::units
