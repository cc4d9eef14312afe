#pragma once

#include <map>

namespace rover::aoa {

/// Corrected direct-path bearings for one timestamp, one entry per visible
/// tag, with per-entry variance.
struct AoaObservation {
    double t = 0.0;
    std::map<int, double> bearings;   // tag id -> world-frame bearing, [0, 2*pi)
    std::map<int, double> variances;  // tag id -> rad^2
};

/// Undoes the array rotation: world bearing = wrap(measured + heading).
/// Composes with the simulator bearing model to plain atan2 geometry.
double correct_aoa(double measured, double heading);

}  // namespace rover::aoa
