#pragma once

#include <Eigen/Core>

namespace rover::heading {

struct HeadingState {
    double phi = 0.0;        // rad, wrapped to [0, 2*pi)
    double gyro_bias = 0.0;  // rad/s
    Eigen::Matrix2d P = Eigen::Matrix2d::Identity() * 0.1;
};

struct EkfConfig {
    double gyro_noise = 2e-3;        // rad/s/sqrt(Hz), process noise on phi
    double bias_walk = 1e-4;         // rad/s/sqrt(Hz), process noise on bias
    double mag_noise = 0.035;        // rad, measurement std
    double init_phi_var = 1e-6;      // assumed-known initial heading
    double init_bias_var = 1e-2;
};

/// Gyro-plus-magnetometer heading filter. State is (phi, gyro_bias); the
/// magnetometer provides a drift-free reference direction up to a stable
/// indoor declination offset which is estimated during initial alignment.
class HeadingEkf {
  public:
    explicit HeadingEkf(const EkfConfig& config = {}, double initial_phi = 0.0);

    /// Gyro propagation: phi += (omega_z - bias) * dt.
    void predict(double omega_z, double dt);

    /// Magnetometer update with a wrapped innovation.
    void update_mag(double mag_heading);

    /// Feeds an alignment sample (robot assumed stationary); once
    /// `alignment_window` seconds of mag readings are in, the declination is
    /// fixed and subsequent update_mag calls use it.
    void align(double mag_heading, double t);

    const HeadingState& state() const { return state_; }
    double phi() const { return state_.phi; }
    double gyro_bias() const { return state_.gyro_bias; }
    double declination() const { return declination_; }
    bool aligned() const { return aligned_; }

    double alignment_window = 2.0;  // s

  private:
    EkfConfig cfg_;
    HeadingState state_;
    double declination_ = 0.0;
    bool aligned_ = false;
    double align_sum_ = 0.0;
    int align_count_ = 0;
    double align_start_ = -1.0;
    double initial_phi_ = 0.0;
};

/// Rotation about +z by phi (orthonormal, det +1).
Eigen::Matrix3d rotation_about_z(double phi);

}  // namespace rover::heading
