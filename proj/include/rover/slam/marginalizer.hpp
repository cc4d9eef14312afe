#pragma once

#include <map>
#include <string>
#include <vector>

#include "rover/slam/window.hpp"

namespace rover::slam {

struct PolicyConfig {
    double min_state_interval = 0.5;   // s, delta: admission time bound
    double similarity_threshold = 0.02;  // epsilon on the observation similarity
    enum class Mode { Flexible, FifoOnly, Off } mode = Mode::Flexible;
    double off_mode_anchor_weight = 400.0;  // gauge anchor when dropping without a prior
};

/// Mean-cosine distance between two per-tag bearing sets observed at two
/// timestamps: 0 for identical observations, 2 for all-antipodal. Requires
/// identical tag sets; throws std::invalid_argument otherwise.
double similarity(const std::map<int, double>& obs_j, const std::map<int, double>& obs_k);

/// Similarity over the common tags (0 when disjoint); the tag-set change is
/// reported separately by the admission criteria.
double similarity_intersection(const std::map<int, double>& obs_j,
                               const std::map<int, double>& obs_k);

/// A state is admitted when enough time has passed, the tag set changed, or
/// the newest observation moved by more than epsilon.
bool should_add_state(double dt, bool tag_set_changed, double similarity_latest,
                      double delta = 0.5, double epsilon = 0.02);

/// The eviction flag for the next step: FIFO while the robot keeps moving or
/// tags change, LIFO under small motion (preserves the old, scale-bearing
/// states).
EvictionFlag choose_eviction(const Window& window, double similarity_recent,
                             bool tag_set_changed);

struct MarginalizeResult {
    std::vector<int> removed_tags;
    bool ridge_applied = false;
};

/// Removes `target_state` from the window, absorbing its measurements into
/// the prior via Schur complement. The target must be the oldest state
/// (FIFO) or the second newest (LIFO). Under LIFO the two odometry factors
/// around the target are concatenated into one spanning factor instead of
/// being absorbed. Tags whose every live factor sits on the target are
/// removed with it (published ones through the Schur complement, unpublished
/// ones dropped).
MarginalizeResult marginalize(Window& window, int target_state);

/// One policy decision record.
struct PolicyEvent {
    double t = 0.0;
    bool added = false;
    EvictionFlag flag = EvictionFlag::FIFO;
    double similarity = 0.0;
    double dt_ms = 0.0;
    int evicted_state = -1;  // -1: none
    EvictionFlag eviction_flag_used = EvictionFlag::FIFO;  // valid when evicted_state >= 0
    std::vector<int> removed_tags;
    bool degenerate_ridge = false;
    SolveStats solve;
    std::string to_jsonl() const;
};

/// Runs one admission + eviction + solve cycle for a new observation.
/// Skipped observations leave the window untouched (the caller keeps
/// accumulating the pending preintegration).
PolicyEvent run_policy(Window& window, const aoa::AoaObservation& obs,
                       const odom::PreintegratedOdometry& pending, double phi,
                       const PolicyConfig& config = {});

}  // namespace rover::slam
