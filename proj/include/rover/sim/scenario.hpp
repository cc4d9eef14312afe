#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "rover/sim/trajectory.hpp"

namespace rover::sim {

struct NoiseConfig {
    double gyro_noise_density = 1e-4;    // rad/s/sqrt(Hz)
    double gyro_bias = 0.002;            // rad/s, constant, z axis
    double accel_noise_density = 2e-3;   // m/s^2/sqrt(Hz)
    double mag_heading_noise = 0.035;    // rad (std)
    double csi_snr = 12.0;               // dB
    double aoa_direct_noise = 0.2407;    // rad (std); bearings-only fast path

    void validate() const;  // throws std::invalid_argument on negatives
};

struct TagSpec {
    int id = 0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    bool nlos = false;
    double max_range = 30.0;  // m; beyond this the link drops
};

/// Ground-truth world for one run: trajectory, tag layout, rates, noise.
struct WorldScenario {
    std::vector<TagSpec> tags;
    Trajectory trajectory;
    double imu_rate = 200.0;    // Hz
    double packet_rate = 10.0;  // Hz, per tag
    double mag_rate = 20.0;     // Hz
    NoiseConfig noise;
    std::uint64_t seed = 1;
    Eigen::Vector2d ap_position = Eigen::Vector2d(-2.0, -2.0);
    std::vector<Eigen::Vector2d> reflectors;
    double mag_declination = 0.3;  // rad, stable indoor reference offset

    void validate() const;
};

/// Declarative scenario description, the unit stored in scenario files.
struct ScenarioConfig {
    MotionProfile profile = StationaryProfile{};
    double duration = 30.0;  // s
    double imu_rate = 200.0;
    double packet_rate = 10.0;
    double mag_rate = 20.0;
    std::vector<TagSpec> tags;
    NoiseConfig noise;
    std::uint64_t seed = 1;
    Eigen::Vector2d ap_position = Eigen::Vector2d(-2.0, -2.0);
    std::vector<Eigen::Vector2d> reflectors;
    double mag_declination = 0.3;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    double start_heading = 0.0;

    /// Generates the trajectory (at the IMU rate) and assembles the world.
    WorldScenario build() const;
    WorldScenario build(std::uint64_t seed_override) const;
};

ScenarioConfig scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const ScenarioConfig& config);
ScenarioConfig load_scenario_file(const std::string& path);

/// Writes `t,x,y,heading,vx,vy,ax,ay` rows.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace rover::sim
