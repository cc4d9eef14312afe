#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "rover/aoa/music.hpp"
#include "rover/heading/ekf.hpp"
#include "rover/odom/preintegration.hpp"
#include "rover/rf/packet.hpp"
#include "rover/sim/scenario.hpp"
#include "rover/slam/marginalizer.hpp"

namespace rover::harness {

enum class EstimatorMode { FullCsi, BearingsOnly };

struct PipelineConfig {
    EstimatorMode mode = EstimatorMode::BearingsOnly;
    slam::WindowConfig window;
    slam::PolicyConfig policy;
    heading::EkfConfig ekf;
    aoa::MusicGrid grid;
    rf::LinkConfig link;
    double omega_initial = 0.0579;  // rad^2; sigma 13.8 deg from the AoA calibration
    double omega_forgetting = 0.98;
    bool adaptive_omega = true;

    PipelineConfig() { window.ridge_on_degeneracy = true; }
};

struct UpdateRecord {
    double t = 0.0;
    Eigen::Vector2d robot_estimate = Eigen::Vector2d::Zero();  // window frame
    Eigen::Vector2d robot_truth = Eigen::Vector2d::Zero();
    double robot_error = 0.0;
    double solve_ms = 0.0;
    int iterations = 0;
    double cost = 0.0;
};

struct PipelineResult {
    std::vector<UpdateRecord> updates;
    std::map<int, Eigen::Vector2d> tag_estimates;  // window frame, last published
    std::map<int, double> tag_errors;              // final, m
    std::vector<std::string> policy_trace;         // JSON lines
    std::vector<double> aoa_errors;                // per-frame |error|, rad (full CSI)
    Eigen::Vector2d window_origin = Eigen::Vector2d::Zero();  // world position of mu_0
    int frames_processed = 0;
    int frames_rejected = 0;
    int n_skips = 0;
    int n_fifo_evictions = 0;
    int n_lifo_evictions = 0;
    double aoa_ms_per_frame = 0.0;
};

/// Runs simulate -> estimate over one scenario: heading filter on the IMU
/// stream, per-packet AoA extraction (or the bearings-only fast path),
/// admission policy, marginalization and the sliding-window solve.
PipelineResult run_pipeline(const sim::WorldScenario& scenario, const PipelineConfig& config);

}  // namespace rover::harness
