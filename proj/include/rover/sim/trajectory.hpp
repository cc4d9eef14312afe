#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>
#include <vector>

namespace rover::sim {

/// One ground-truth sample. `accel` is the exact forward difference of the
/// velocity column, (v[k+1]-v[k])/dt, so discrete double integration of the
/// stored accelerations reproduces the positions bit-for-bit.
struct TrajectorySample {
    double t = 0.0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double heading = 0.0;  // rad, wrapped to [0, 2*pi)
    Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
    Eigen::Vector2d acceleration = Eigen::Vector2d::Zero();
};

using Trajectory = std::vector<TrajectorySample>;

struct GenericProfile {
    std::uint64_t seed = 0;          // segment randomization
    double max_speed = 0.35;         // m/s
    double linear_accel = 0.5;       // m/s^2 used for ramps
    double turn_rate = 1.2;          // rad/s for in-place rotations
};

struct StationaryProfile {
    double duration = 0.0;  // 0 means "fill the requested duration"
};

struct ConstantVelocityProfile {
    double speed = 0.1;    // m/s
    double heading = 0.0;  // direction of travel, rad
};

struct RectangleProfile {
    double width = 0.0;    // m
    double height = 0.0;   // m
    double speed = 0.25;   // cruise speed on legs, m/s
    double linear_accel = 0.5;
    double turn_rate = 1.5708;  // ~90 deg/s at corners
};

struct CompositeProfile;

using MotionProfile = std::variant<GenericProfile, StationaryProfile, ConstantVelocityProfile,
                                   RectangleProfile, CompositeProfile>;

struct CompositeProfile {
    std::vector<std::pair<MotionProfile, double>> segments;  // (profile, duration s)
};

/// Generates a kinematically consistent planar trajectory sampled at dt.
/// Headings follow the path tangent while moving and are held while
/// stationary; profile transitions insert velocity ramps so the velocity
/// column stays continuous. Throws std::invalid_argument on nonpositive
/// duration/dt or a rectangle with nonpositive sides.
Trajectory generate_trajectory(const MotionProfile& profile, double duration, double dt,
                               const Eigen::Vector2d& start = Eigen::Vector2d::Zero(),
                               double start_heading = 0.0);

/// Sum of |p[k+1]-p[k]| over the trajectory.
double path_length(const Trajectory& traj);

}  // namespace rover::sim
