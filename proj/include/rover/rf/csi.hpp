#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace rover::rf {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr int kNumAntennas = 3;

/// Composition of one transmitter-to-tag path with one tag-to-receiver path.
/// The AoA is that of the tag-to-receiver component alone.
struct VirtualPath {
    double tof = 0.0;                        // s, sum of the two legs
    double aoa = 0.0;                        // rad, in the array frame
    std::complex<double> attenuation{1.0, 0.0};

    void validate() const;  // tof >= 0, |attenuation| <= 1
};

/// Receive geometry: three-element uniform circular array plus OFDM grid.
struct ArrayGeometry {
    double spacing = 0.025733;     // m, lambda/2 at 5.825 GHz
    double wavelength = 0.051466;  // m
    double f_delta = 312.5e3;      // Hz between adjacent subcarriers
    int n_subcarriers = 30;
};

/// Channel matrix for one received backscatter packet.
struct CsiFrame {
    int tag_id = -1;
    int channel_index = -1;
    double t = 0.0;
    Eigen::MatrixXcd H;  // kNumAntennas x n_subcarriers
    double f_delta = 312.5e3;
    double wavelength = 0.051466;
    double array_spacing = 0.025733;
};

/// Geometric phase lag (meters of extra travel) at antenna m (0-based) for a
/// wavefront from direction theta: antenna 1 lags d*cos(theta), antenna 2
/// lags d*cos(theta + pi/3).
double antenna_path_delta(int antenna, double theta, double spacing);

/// Sums path contributions into the antenna x subcarrier matrix. Subcarrier
/// n (0-based) accrues phase -2*pi*tof*n*f_delta; antennas accrue the
/// circular-array geometric phases. Throws on an empty path list or
/// nonpositive geometry.
CsiFrame synthesize_csi(const std::vector<VirtualPath>& paths, const ArrayGeometry& geometry);

}  // namespace rover::rf
