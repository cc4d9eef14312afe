#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rover/harness/pipeline.hpp"

namespace rover::harness {

enum class MargMode { Flexible, FifoOnly, Off };

/// One experiment: a scenario plus estimator settings.
struct RunConfig {
    sim::ScenarioConfig scenario;
    EstimatorMode mode = EstimatorMode::BearingsOnly;
    int window_size = 50;
    MargMode marginalization = MargMode::Flexible;
    std::uint64_t seed = 1;
    int trials = 1;

    void validate() const;
    PipelineConfig pipeline_config(const sim::NoiseConfig& noise) const;
};

RunConfig run_config_from_json(const std::string& json_text);
RunConfig load_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);

struct TrialReport {
    std::uint64_t seed = 0;
    std::vector<double> error_curve;       // per-update robot error, m
    std::vector<double> update_times;      // timestamps of the error curve, s
    double robot_mean_error = 0.0;
    double robot_median_error = 0.0;
    double robot_rmse = 0.0;
    std::map<int, double> tag_final_errors;
    double mean_tag_error_los = 0.0;
    double mean_solve_ms = 0.0;
    double runtime_s = 0.0;
    int updates = 0;
    int skips = 0;
    int fifo_evictions = 0;
    int lifo_evictions = 0;
    PipelineResult raw;  // full pipeline output of this trial
};

struct RunReport {
    RunConfig config;
    std::vector<TrialReport> trials;
    double median_robot_mean_error = 0.0;
    double median_tag_error_los = 0.0;

    std::string to_json() const;
};

/// Runs `config.trials` trials (seeds seed, seed+1, ...), in parallel up to
/// the ROVER_THREADS cap. Deterministic per seed. When `out_dir` is given,
/// writes report.json, trajectory.csv, tags.csv and policy.jsonl there.
RunReport run(const RunConfig& config, const std::optional<std::string>& out_dir = {});

/// Paired run of two configurations on the same scenario and seeds; throws
/// std::invalid_argument when the scenarios or seeds differ.
struct CompareReport {
    RunReport a;
    RunReport b;
    std::vector<double> error_ratio_curve;  // median over trials, b over a per update
    std::string to_json() const;
};
CompareReport compare(const RunConfig& config_a, const RunConfig& config_b,
                      const std::optional<std::string>& out_dir = {});

struct SweepRow {
    int window_size = 0;
    double median_robot_mean_error = 0.0;
    double mean_solve_ms = 0.0;
    std::vector<double> per_trial_mean_error;
};
std::vector<SweepRow> sweep_window_size(const RunConfig& config, const std::vector<int>& sizes,
                                        const std::optional<std::string>& out_dir = {});

/// Worker cap: ROVER_THREADS environment variable, default 1.
int worker_threads();

}  // namespace rover::harness
