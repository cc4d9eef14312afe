#pragma once

#include <complex>
#include <vector>

namespace rover::rf {

/// Spectrum of a square-wave-modulated backscatter signal: odd harmonics of
/// the shift frequency mirrored around the carrier.
struct ShiftSpectrum {
    double carrier_hz = 0.0;
    double shift_hz = 0.0;
    // (absolute frequency, complex amplitude); harmonic n contributes the
    // pair carrier +- (2n-1)*shift with |amplitude| = 2/(pi*(2n-1)).
    std::vector<std::pair<double, std::complex<double>>> harmonics;
};

/// Throws std::invalid_argument if shift_hz <= 0 or n_harmonics < 1.
ShiftSpectrum sideband_spectrum(double carrier_hz, double shift_hz, int n_harmonics);

}  // namespace rover::rf
