#include "rover/rf/spectrum.hpp"

#include <numbers>
#include <stdexcept>

namespace rover::rf {

ShiftSpectrum sideband_spectrum(double carrier_hz, double shift_hz, int n_harmonics) {
    if (shift_hz <= 0.0) throw std::invalid_argument("shift frequency must be positive");
    if (n_harmonics < 1) throw std::invalid_argument("need at least one harmonic");

    ShiftSpectrum s;
    s.carrier_hz = carrier_hz;
    s.shift_hz = shift_hz;
    s.harmonics.reserve(2 * static_cast<std::size_t>(n_harmonics));
    for (int n = 1; n <= n_harmonics; ++n) {
        const double order = static_cast<double>(2 * n - 1);
        const std::complex<double> amp(0.0, 2.0 / (std::numbers::pi * order));
        // The square-wave mixing term splits the baseband into images at
        // carrier -+ (2n-1)*shift with opposite signs.
        s.harmonics.emplace_back(carrier_hz - order * shift_hz, amp);
        s.harmonics.emplace_back(carrier_hz + order * shift_hz, -amp);
    }
    return s;
}

}  // namespace rover::rf
