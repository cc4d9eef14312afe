#pragma once

#include <Eigen/Core>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "rover/aoa/observation.hpp"
#include "rover/odom/preintegration.hpp"
#include "rover/slam/prior.hpp"

namespace rover::slam {

enum class EvictionFlag { FIFO, LIFO };

struct WindowConfig {
    int max_states = 50;
    double origin_anchor_weight = 1e6;   // information per axis pinning mu_0
    double initial_tag_distance = 3.0;   // m, ray initialization guess
    double min_range_weight = 0.3;       // m, floor for the AoA weight distance
    int max_solve_iterations = 10;
    double convergence_tol = 1e-6;       // m
    bool ridge_on_degeneracy = false;    // solve() fallback instead of throwing
    double degeneracy_ridge = 1e-8;
};

struct RobotNode {
    int id = 0;  // monotone sequence id, unique across the run
    double t = 0.0;
    Eigen::Vector3d mu = Eigen::Vector3d::Zero();
    Eigen::Vector3d nu = Eigen::Vector3d::Zero();
    double phi = 0.0;  // world heading from the heading filter
    std::map<int, double> bearings;  // tag -> corrected world bearing
};

struct TagNode {
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    int first_seen_state = -1;
    int obs_count = 0;
    bool published = false;  // becomes true at the second observation
};

/// Bearing constraint of one tag seen from one state. The stored direction
/// is the world-frame unit vector of the corrected AoA; the cross-product
/// residual against (b - mu) is linear in both endpoints.
struct AoaFactor {
    int state_id = 0;
    int tag_id = 0;
    Eigen::Vector3d r_world = Eigen::Vector3d::UnitX();
    double omega_var = 0.0;  // bearing variance, rad^2
};

/// Preintegrated translation constraint between consecutive states. The
/// preintegration is kept whole so LIFO eviction can concatenate intervals.
struct OdomFactor {
    int state_a = 0;
    int state_b = 0;
    odom::PreintegratedOdometry preint;
};

struct SolveStats {
    int iterations = 0;
    double cost = 0.0;
    bool ridge_applied = false;
};

/// Sliding-window joint state over robot positions and tag positions, with
/// the associated measurement factors and marginalization prior. Planar:
/// only x and y are solved, z is carried as zero.
class Window {
  public:
    explicit Window(const WindowConfig& config = {});

    const WindowConfig& config() const { return cfg_; }
    const std::deque<RobotNode>& states() const { return states_; }
    const std::map<int, TagNode>& tags() const { return tags_; }
    const std::vector<AoaFactor>& aoa_factors() const { return aoa_factors_; }
    const std::vector<OdomFactor>& odom_factors() const { return odom_factors_; }
    const InfoForm& prior() const { return prior_; }
    InfoForm& prior() { return prior_; }
    EvictionFlag flag() const { return flag_; }
    void set_flag(EvictionFlag f) { flag_ = f; }

    bool empty() const { return states_.empty(); }
    int size() const { return static_cast<int>(states_.size()); }
    bool full() const { return size() >= cfg_.max_states; }

    const RobotNode& node(int state_id) const;
    RobotNode& node(int state_id);
    const RobotNode& newest() const { return states_.back(); }
    const RobotNode& oldest() const { return states_.front(); }

    /// Appends a state. The first state is pinned at the origin by a strong
    /// prior; later states are initialized by propagating the previous one
    /// through `preint`. New tags are initialized on their bearing ray at
    /// the configured guess distance and stay unpublished until their second
    /// observation. Returns the new state's sequence id.
    int add_state(const aoa::AoaObservation& obs, const odom::PreintegratedOdometry& preint,
                  double phi);

    /// Weighted linear least squares over all published variables: AoA rows,
    /// odometry rows and the prior, solved by dense Cholesky on the normal
    /// equations, iterating the distance-dependent AoA weights and the
    /// velocity chain to a fixed point. Throws DegeneracyError naming the
    /// unobservable directions unless ridge fallback is configured.
    SolveStats solve();

    /// Removes a state and optionally a set of tags from the bookkeeping
    /// (factors must have been detached already by the caller).
    void erase_state(int state_id);
    void erase_tag(int tag_id);

    void add_aoa_factor(const AoaFactor& f) { aoa_factors_.push_back(f); }
    void add_odom_factor(OdomFactor f) { odom_factors_.push_back(std::move(f)); }
    std::vector<AoaFactor> detach_aoa_factors_of_state(int state_id);
    std::vector<OdomFactor> detach_odom_factors_of_state(int state_id);

    /// Solve-order variable keys: states in window order, then published
    /// tags by id.
    std::vector<VarKey> variable_order() const;

    /// Tags whose every observation lives on the given state.
    std::vector<int> tags_only_observed_by(int state_id) const;

    int next_state_id() const { return next_state_id_; }

  private:
    friend struct WindowAssembly;

    void repropagate_velocities();

    WindowConfig cfg_;
    std::deque<RobotNode> states_;
    std::map<int, TagNode> tags_;
    std::vector<AoaFactor> aoa_factors_;
    std::vector<OdomFactor> odom_factors_;
    InfoForm prior_;
    EvictionFlag flag_ = EvictionFlag::FIFO;
    int next_state_id_ = 0;
};

struct AoaResidual {
    Eigen::Vector3d residual;  // cross(r_world, b - mu); only z is informative
    Eigen::Matrix3d j_tag;     // d residual / d b
    Eigen::Matrix3d j_state;   // d residual / d mu
};

struct OdomResidual {
    Eigen::Vector3d residual;   // u_hat - (R_0^a (mu_b - mu_a) - nu_a dt + g gt)
    Eigen::Matrix3d j_state_a;  // d residual / d mu_a
    Eigen::Matrix3d j_state_b;  // d residual / d mu_b
    Eigen::Vector3d rhs;        // u_hat + nu_a dt - g gt (the linear-system z)
};

AoaResidual make_aoa_residual(const AoaFactor& factor, const Window& window);
OdomResidual make_odometry_residual(const OdomFactor& factor, const Window& window);

}  // namespace rover::slam
