#pragma once

#include <Eigen/Core>
#include <vector>

#include "rover/sim/imu.hpp"

namespace rover::odom {

struct PreintConfig {
    double accel_noise_density = 2e-3;  // m/s^2/sqrt(Hz), drives Lambda
    double gyro_inflation = 0.05;       // fraction added to Lambda for gyro coupling
};

/// Relative-motion summary of an IMU interval: incremental rotation R
/// (frame k+1 -> frame k), velocity sum V, translation sum T, and the
/// discrete gravity coefficients that double-integrate a unit vertical
/// acceleration through the same sums. Gravity is NOT removed here; the
/// propagation step subtracts g times the stored coefficients, which makes
/// a stationary interval an exact fixed point of the discrete scheme.
///
/// Per sample (specific force a, angular rate w, duration dt):
///   T += V dt + (R a) dt^2        (V before this sample's update)
///   V += (R a) dt
///   R <- orthonormalize(R (I + [w]x dt))
/// Lambda is the accelerometer-noise covariance of T propagated to first
/// order through these sums.
class PreintegratedOdometry {
  public:
    explicit PreintegratedOdometry(const PreintConfig& config = {});

    void update(const Eigen::Vector3d& omega, const Eigen::Vector3d& accel, double dt);

    /// First sample sets the interval start; subsequent calls must be
    /// contiguous in time.
    void update(const sim::ImuSample& sample, double dt);

    const Eigen::Matrix3d& rotation_end_to_start() const { return rot_; }   // R_{k+1}^k
    Eigen::Matrix3d rotation_start_to_end() const { return rot_.transpose(); }  // R_k^{k+1}
    const Eigen::Vector3d& velocity_sum() const { return vel_; }  // V_{k+1}^k
    const Eigen::Vector3d& translation_sum() const { return trans_; }  // T_{k+1}^k

    /// Covariance of the translation sum (gyro coupling folded in as a
    /// configured inflation).
    Eigen::Matrix3d lambda() const;

    double dt_total() const { return gravity_vel_coeff_; }
    double gravity_vel_coeff() const { return gravity_vel_coeff_; }   // = sum dt
    double gravity_trans_coeff() const { return gravity_trans_coeff_; }
    int sample_count() const { return count_; }
    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    bool empty() const { return count_ == 0; }

    void set_time_span(double t_start, double t_end);

    /// Appends `other` (which must start where this interval ends, within
    /// 1.5 nominal sample periods when timestamps are set) without touching
    /// the raw samples; equals preintegrating the concatenated stream.
    void concatenate(const PreintegratedOdometry& other);

    const PreintConfig& config() const { return cfg_; }

  private:
    PreintConfig cfg_;
    Eigen::Matrix3d rot_ = Eigen::Matrix3d::Identity();
    Eigen::Vector3d vel_ = Eigen::Vector3d::Zero();
    Eigen::Vector3d trans_ = Eigen::Vector3d::Zero();
    double gravity_vel_coeff_ = 0.0;
    double gravity_trans_coeff_ = 0.0;
    Eigen::Matrix3d lambda_t_ = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d lambda_v_ = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d cov_tv_ = Eigen::Matrix3d::Zero();
    int count_ = 0;
    double t_start_ = 0.0;
    double t_end_ = 0.0;
    double nominal_dt_ = 0.0;
};

/// Preintegrates a buffered sample span; sample i integrates over
/// [t_i, t_{i+1}) and the last sample over [t_last, t_end). Throws on an
/// empty buffer or non-monotone timestamps.
PreintegratedOdometry preintegrate(const std::vector<sim::ImuSample>& samples, double t_end,
                                   const PreintConfig& config = {});

/// Position propagation: mu_{k+1} = mu_k + R_k0 (nu_k dt - g gt + T).
Eigen::Vector3d propagate_position(const Eigen::Vector3d& mu_k, const Eigen::Vector3d& nu_k,
                                   const Eigen::Matrix3d& rot_k_to_world,
                                   const PreintegratedOdometry& preint);

/// Velocity propagation: nu_{k+1} = R_k^{k+1} (nu_k - g gv + V).
Eigen::Vector3d propagate_velocity(const Eigen::Vector3d& nu_k,
                                   const Eigen::Matrix3d& rot_k_to_k1,
                                   const PreintegratedOdometry& preint);

}  // namespace rover::odom
