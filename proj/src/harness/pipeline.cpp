#include "rover/harness/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "rover/aoa/observation.hpp"
#include "rover/core/angles.hpp"
#include "rover/rf/channels.hpp"
#include "rover/sim/imu.hpp"

namespace rover::harness {

namespace {

double ms_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

PipelineResult run_pipeline(const sim::WorldScenario& scenario, const PipelineConfig& config) {
    PipelineResult result;
    const auto& traj = scenario.trajectory;
    if (traj.size() < 2) throw std::invalid_argument("scenario trajectory too short");
    const double imu_dt = traj[1].t - traj[0].t;

    const auto imu = sample_imu(traj, scenario.noise, scenario.seed, scenario.mag_rate,
                                scenario.mag_declination);

    // Channel assignment in tag order.
    const auto channels = rf::allocate_channels(static_cast<int>(scenario.tags.size()));
    std::map<int, int> tag_channel;
    {
        int i = 0;
        for (const auto& tag : scenario.tags) tag_channel[tag.id] = channels.at(i++);
    }

    std::mt19937_64 packet_rng(scenario.seed ^ 0xc2b2ae3d27d4eb4fULL);
    std::mt19937_64 bearing_rng(scenario.seed ^ 0x165667b19e3779f9ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);

    heading::HeadingEkf ekf(config.ekf, traj.front().heading);
    odom::PreintConfig preint_cfg;
    preint_cfg.accel_noise_density = std::max(scenario.noise.accel_noise_density, 1e-5);

    slam::Window window(config.window);
    odom::PreintegratedOdometry pending(preint_cfg);

    std::map<int, double> omega_var;  // adaptive per-tag bearing variance
    for (const auto& tag : scenario.tags) omega_var[tag.id] = config.omega_initial;

    // Packet ticks snapped onto the IMU grid.
    const int packet_stride =
        std::max(1, static_cast<int>(std::llround(1.0 / (scenario.packet_rate * imu_dt))));

    bool have_origin = false;
    Eigen::Vector2d origin = Eigen::Vector2d::Zero();
    std::map<int, Eigen::Vector2d> tag_truth;  // window frame, filled at origin time
    double aoa_time_ms = 0.0;
    int aoa_frames = 0;

    for (std::size_t k = 0; k < imu.size(); ++k) {
        const auto& sample = imu[k];

        // Heading filter first so the correction uses the freshest estimate.
        ekf.predict(sample.omega.z(), imu_dt);
        if (sample.mag_heading) ekf.align(*sample.mag_heading, sample.t);

        const Eigen::Vector3d omega_corrected =
            sample.omega - Eigen::Vector3d(0.0, 0.0, ekf.gyro_bias());
        pending.update({sample.t, omega_corrected, sample.accel, {}}, imu_dt);

        if (k % static_cast<std::size_t>(packet_stride) != 0) continue;
        const auto& truth = traj[k];

        aoa::AoaObservation obs;
        obs.t = sample.t;
        for (const auto& tag : scenario.tags) {
            const double range = (tag.position - truth.position).norm();
            if (range > tag.max_range) continue;

            if (config.mode == EstimatorMode::BearingsOnly) {
                double sigma = scenario.noise.aoa_direct_noise;
                if (tag.nlos) sigma *= 2.0;
                const double measured =
                    wrap_2pi(sim::true_bearing(truth.position, truth.heading, tag.position) +
                             sigma * gauss(bearing_rng));
                obs.bearings[tag.id] = aoa::correct_aoa(measured, ekf.phi());
                obs.variances[tag.id] = omega_var[tag.id];
                continue;
            }

            auto frame = rf::simulate_packet(truth.position, truth.heading, tag,
                                             tag_channel[tag.id], scenario.ap_position,
                                             scenario.reflectors, scenario.noise, config.link,
                                             sample.t, packet_rng);
            if (!frame) continue;
            ++result.frames_processed;
            const auto t0 = std::chrono::steady_clock::now();
            const auto paths = aoa::estimate_aoa_tof(*frame, config.grid);
            aoa_time_ms += ms_since(t0);
            ++aoa_frames;
            if (paths.empty()) {
                ++result.frames_rejected;
                continue;
            }
            const double direct = paths.front().aoa;
            const double truth_bearing =
                sim::true_bearing(truth.position, truth.heading, tag.position);
            result.aoa_errors.push_back(std::abs(angle_diff(direct, truth_bearing)));
            obs.bearings[tag.id] = aoa::correct_aoa(direct, ekf.phi());
            obs.variances[tag.id] = omega_var[tag.id];
        }
        if (obs.bearings.empty()) continue;

        const auto t0 = std::chrono::steady_clock::now();
        auto event = slam::run_policy(window, obs, pending, ekf.phi(), config.policy);
        const double elapsed_ms = ms_since(t0);
        result.policy_trace.push_back(event.to_jsonl());
        if (!event.added) {
            ++result.n_skips;
            continue;
        }
        if (event.evicted_state >= 0) {
            if (event.eviction_flag_used == slam::EvictionFlag::FIFO) {
                ++result.n_fifo_evictions;
            } else {
                ++result.n_lifo_evictions;
            }
        }

        pending = odom::PreintegratedOdometry(preint_cfg);
        if (!have_origin) {
            have_origin = true;
            origin = truth.position;
            result.window_origin = origin;
            for (const auto& tag : scenario.tags) {
                tag_truth[tag.id] = tag.position - origin;
            }
        }

        UpdateRecord rec;
        rec.t = sample.t;
        rec.robot_estimate = window.newest().mu.head<2>();
        rec.robot_truth = truth.position - origin;
        rec.robot_error = (rec.robot_estimate - rec.robot_truth).norm();
        rec.solve_ms = elapsed_ms;
        rec.iterations = event.solve.iterations;
        rec.cost = event.solve.cost;
        result.updates.push_back(rec);

        for (const auto& [tag_id, tag] : window.tags()) {
            if (tag.published) result.tag_estimates[tag_id] = tag.b.head<2>();
        }

        if (config.adaptive_omega) {
            const auto& newest = window.newest();
            for (const auto& [tag_id, bearing] : newest.bearings) {
                const auto it = window.tags().find(tag_id);
                if (it == window.tags().end() || !it->second.published) continue;
                const Eigen::Vector2d d = it->second.b.head<2>() - newest.mu.head<2>();
                if (d.squaredNorm() < 1e-6) continue;
                const double residual = angle_diff(std::atan2(d.y(), d.x()), bearing);
                double& var = omega_var[tag_id];
                var = std::max(config.omega_forgetting * var +
                                   (1.0 - config.omega_forgetting) * residual * residual,
                               1e-6);
            }
        }
    }

    for (const auto& [tag_id, est] : result.tag_estimates) {
        const auto it = tag_truth.find(tag_id);
        if (it != tag_truth.end()) {
            result.tag_errors[tag_id] = (est - it->second).norm();
        }
    }
    result.aoa_ms_per_frame = aoa_frames > 0 ? aoa_time_ms / aoa_frames : 0.0;
    return result;
}

}  // namespace rover::harness
