#include "rover/rf/csi.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rover::rf {

void VirtualPath::validate() const {
    if (tof < 0.0 || !std::isfinite(tof)) throw std::invalid_argument("path tof must be >= 0");
    if (std::abs(attenuation) > 1.0 + 1e-12) {
        throw std::invalid_argument("path attenuation magnitude must be <= 1");
    }
}

double antenna_path_delta(int antenna, double theta, double spacing) {
    switch (antenna) {
        case 0: return 0.0;
        case 1: return spacing * std::cos(theta);
        case 2: return spacing * std::cos(theta + std::numbers::pi / 3.0);
        default: throw std::invalid_argument("antenna index out of range");
    }
}

CsiFrame synthesize_csi(const std::vector<VirtualPath>& paths, const ArrayGeometry& g) {
    if (paths.empty()) throw std::invalid_argument("need at least one virtual path");
    if (g.spacing <= 0.0 || g.wavelength <= 0.0 || g.f_delta <= 0.0) {
        throw std::invalid_argument("array geometry must be positive");
    }
    if (g.n_subcarriers < 2) throw std::invalid_argument("need at least two subcarriers");

    CsiFrame frame;
    frame.H = Eigen::MatrixXcd::Zero(kNumAntennas, g.n_subcarriers);
    frame.f_delta = g.f_delta;
    frame.wavelength = g.wavelength;
    frame.array_spacing = g.spacing;

    for (const auto& p : paths) {
        for (int m = 0; m < kNumAntennas; ++m) {
            const double geo = antenna_path_delta(m, p.aoa, g.spacing) / g.wavelength;
            for (int n = 0; n < g.n_subcarriers; ++n) {
                const double phase =
                    -2.0 * std::numbers::pi * (p.tof * static_cast<double>(n) * g.f_delta + geo);
                frame.H(m, n) += p.attenuation * std::polar(1.0, phase);
            }
        }
    }
    return frame;
}

}  // namespace rover::rf
