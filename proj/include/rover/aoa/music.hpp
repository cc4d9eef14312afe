#pragma once

#include <string>
#include <vector>

#include "rover/rf/csi.hpp"

namespace rover::aoa {

/// One propagation path recovered from a CSI frame.
struct PathEstimate {
    double aoa = 0.0;    // rad, [0, 2*pi), array frame
    double tof = 0.0;    // s
    double power = 0.0;  // pseudo-spectrum peak height
};

/// Search grid for the joint (AoA, ToF) spectrum.
struct MusicGrid {
    double theta_step_deg = 1.0;
    double tau_step = 2e-9;       // s
    double tau_max = 200e-9;      // s
    double peak_threshold = 8.0;  // peak height relative to the spectrum median
    int max_paths = 5;
};

/// Joint AoA-ToF estimation on the forward-backward smoothed subspace
/// spectrum. The scan covers theta in [0, 180] degrees on the primary
/// antenna pair; the front-back ambiguity of each peak is resolved with the
/// third antenna. Returns estimates sorted by ascending ToF (the first entry
/// is the direct path), or an empty vector when no peak clears the
/// prominence threshold (noise-only frame).
///
/// When `spectrum_dump_csv` is nonempty the scanned pseudo-spectrum is
/// written there as `theta_deg,tau_ns,power` rows (debug aid).
std::vector<PathEstimate> estimate_aoa_tof(const rf::CsiFrame& frame, const MusicGrid& grid = {},
                                           const std::string& spectrum_dump_csv = {});

}  // namespace rover::aoa
