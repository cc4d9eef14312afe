#pragma once

#include <cmath>
#include <numbers>

namespace rover {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2*pi).
inline double wrap_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    // fmod can return exactly 2*pi after the correction when a is a tiny
    // negative number; fold that back to 0.
    if (a >= kTwoPi) a = 0.0;
    return a;
}

/// Wraps an angle into [-pi, pi).
inline double wrap_pi(double a) {
    a = std::fmod(a + std::numbers::pi, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a - std::numbers::pi;
}

/// Shortest signed angular difference a - b, in [-pi, pi).
inline double angle_diff(double a, double b) { return wrap_pi(a - b); }

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace rover
