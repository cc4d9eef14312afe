#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "rover/sim/scenario.hpp"

namespace rover::sim {

/// One inertial sample. `accel` is specific force in the body frame at the
/// sample start (gravity included: at rest it reads (0,0,9.8)).
struct ImuSample {
    double t = 0.0;
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();  // rad/s
    Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2
    std::optional<double> mag_heading;                // rad, at the magnetometer rate
};

inline constexpr double kGravity = 9.8;  // m/s^2, +z in the world frame

/// Samples the IMU over a trajectory. Sample k covers [t_k, t_k + dt): the
/// gyro reports the wrapped heading increment over the interval divided by
/// dt, and the accelerometer reports the forward-difference world
/// acceleration rotated into the body frame at t_k, plus gravity. In
/// noiseless mode this is the exact inverse of trapezoid double integration.
/// Deterministic for a fixed seed.
std::vector<ImuSample> sample_imu(const Trajectory& trajectory, const NoiseConfig& noise,
                                  std::uint64_t seed, double mag_rate = 20.0,
                                  double mag_declination = 0.0);

/// Uncorrected bearing the antenna array observes: atan2(tag - robot) minus
/// the robot heading, wrapped to [0, 2*pi). Throws std::invalid_argument on
/// coincident positions.
double true_bearing(const Eigen::Vector2d& robot_pos, double heading,
                    const Eigen::Vector2d& tag_pos);

}  // namespace rover::sim
