#include "rover/slam/marginalizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rover/core/angles.hpp"
#include "rover/core/errors.hpp"

namespace rover::slam {

namespace {

std::set<int> tag_set_of(const std::map<int, double>& obs) {
    std::set<int> s;
    for (const auto& [tag, bearing] : obs) s.insert(tag);
    return s;
}

/// Frozen-weight information rows of an AoA factor (z row of the cross
/// product), added to a joint system during marginalization.
void absorb_aoa_factor(InfoForm& joint, const AoaFactor& f, const Window& window) {
    const auto tag_it = window.tags().find(f.tag_id);
    if (tag_it == window.tags().end() || !tag_it->second.published) return;
    const RobotNode& s = window.node(f.state_id);
    const double range =
        std::max(window.config().min_range_weight,
                 (tag_it->second.b.head<2>() - s.mu.head<2>()).norm());
    const double w = 1.0 / (range * range * std::max(f.omega_var, 1e-8));

    const double rx = f.r_world.x(), ry = f.r_world.y();
    Eigen::Matrix<double, Eigen::Dynamic, 2> j_tag(1, 2), j_state(1, 2);
    j_tag << -ry, rx;
    j_state << ry, -rx;
    Eigen::VectorXd z(1);
    z << 0.0;
    Eigen::MatrixXd weight(1, 1);
    weight << w;
    joint.add_rows({tag_key(f.tag_id), state_key(f.state_id)}, {j_tag, j_state}, z, weight);
}

void absorb_odom_factor(InfoForm& joint, const OdomFactor& f, const Window& window) {
    const OdomResidual r = make_odometry_residual(f, window);
    Eigen::Matrix2d lambda = f.preint.lambda().topLeftCorner<2, 2>();
    lambda.diagonal().array() += 1e-10;
    const Eigen::Matrix2d weight = lambda.inverse();

    Eigen::Matrix<double, Eigen::Dynamic, 2> ja(2, 2), jb(2, 2);
    ja = -r.j_state_a.topLeftCorner<2, 2>();
    jb = -r.j_state_b.topLeftCorner<2, 2>();
    joint.add_rows({state_key(f.state_a), state_key(f.state_b)}, {ja, jb}, r.rhs.head<2>(),
                   weight);
}

}  // namespace

double similarity(const std::map<int, double>& obs_j, const std::map<int, double>& obs_k) {
    if (tag_set_of(obs_j) != tag_set_of(obs_k)) {
        throw std::invalid_argument("similarity requires identical tag sets");
    }
    if (obs_j.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [tag, bearing_j] : obs_j) {
        sum += std::cos(bearing_j - obs_k.at(tag));
    }
    return 1.0 - sum / static_cast<double>(obs_j.size());
}

double similarity_intersection(const std::map<int, double>& obs_j,
                               const std::map<int, double>& obs_k) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [tag, bearing_j] : obs_j) {
        const auto it = obs_k.find(tag);
        if (it == obs_k.end()) continue;
        sum += std::cos(bearing_j - it->second);
        ++count;
    }
    if (count == 0) return 0.0;
    return 1.0 - sum / static_cast<double>(count);
}

bool should_add_state(double dt, bool tag_set_changed, double similarity_latest, double delta,
                      double epsilon) {
    return dt > delta || tag_set_changed || similarity_latest > epsilon;
}

EvictionFlag choose_eviction(const Window& window, double similarity_recent,
                             bool tag_set_changed) {
    if (!window.full()) {
        throw std::invalid_argument("eviction flag is only chosen on a full window");
    }
    return (similarity_recent > 0.02 || tag_set_changed) ? EvictionFlag::FIFO
                                                         : EvictionFlag::LIFO;
}

MarginalizeResult marginalize(Window& window, int target_state) {
    const bool is_oldest = window.oldest().id == target_state;
    const bool is_second_newest =
        window.size() >= 2 && window.states()[window.states().size() - 2].id == target_state;
    if (!is_oldest && !is_second_newest) {
        throw std::invalid_argument("marginalization target must be the oldest state (FIFO) "
                                    "or the second newest (LIFO)");
    }

    MarginalizeResult result;
    result.removed_tags = window.tags_only_observed_by(target_state);

    // Joint information: the current prior plus every absorbed measurement.
    InfoForm joint = window.prior();
    joint.ensure(state_key(target_state));

    const auto aoa_detached = window.detach_aoa_factors_of_state(target_state);
    for (const auto& f : aoa_detached) absorb_aoa_factor(joint, f, window);

    if (is_oldest) {
        // All odometry touching the head state is absorbed.
        const auto odom_detached = window.detach_odom_factors_of_state(target_state);
        for (const auto& f : odom_detached) absorb_odom_factor(joint, f, window);
    } else {
        // LIFO keeps the inertial information as a measurement: concatenate
        // the two intervals around the target into one factor.
        auto odom_detached = window.detach_odom_factors_of_state(target_state);
        const OdomFactor* into = nullptr;
        const OdomFactor* out_of = nullptr;
        for (const auto& f : odom_detached) {
            if (f.state_b == target_state) into = &f;
            if (f.state_a == target_state) out_of = &f;
        }
        if (into != nullptr && out_of != nullptr) {
            OdomFactor merged;
            merged.state_a = into->state_a;
            merged.state_b = out_of->state_b;
            merged.preint = into->preint;
            merged.preint.concatenate(out_of->preint);
            window.add_odom_factor(std::move(merged));
        } else if (into != nullptr || out_of != nullptr) {
            // Window boundary: nothing to bridge, absorb instead.
            absorb_odom_factor(joint, into != nullptr ? *into : *out_of, window);
        }
    }

    std::vector<VarKey> to_remove = {state_key(target_state)};
    for (int tag : result.removed_tags) {
        if (window.tags().at(tag).published) {
            to_remove.push_back(tag_key(tag));
        } else {
            joint.drop(tag_key(tag));  // never entered the solve
        }
    }
    result.ridge_applied = joint.marginalize_out(to_remove);

    window.prior() = std::move(joint);
    window.erase_state(target_state);
    for (int tag : result.removed_tags) window.erase_tag(tag);
    return result;
}

std::string PolicyEvent::to_jsonl() const {
    std::ostringstream os;
    os << "{\"t\":" << t << ",\"decision\":\"" << (added ? "add" : "skip") << "\""
       << ",\"flag\":\"" << (flag == EvictionFlag::FIFO ? "FIFO" : "LIFO") << "\""
       << ",\"M\":" << similarity << ",\"dt_ms\":" << dt_ms
       << ",\"evicted_state\":" << evicted_state;
    if (!removed_tags.empty()) {
        os << ",\"removed_tags\":[";
        for (std::size_t i = 0; i < removed_tags.size(); ++i) {
            os << (i > 0 ? "," : "") << removed_tags[i];
        }
        os << "]";
    }
    if (degenerate_ridge) os << ",\"ridge\":true";
    os << "}";
    return os.str();
}

PolicyEvent run_policy(Window& window, const aoa::AoaObservation& obs,
                       const odom::PreintegratedOdometry& pending, double phi,
                       const PolicyConfig& config) {
    PolicyEvent event;
    event.t = obs.t;
    event.flag = window.flag();

    if (!window.empty()) {
        const auto& latest = window.newest();
        event.dt_ms = (obs.t - latest.t) * 1e3;
        const bool changed = tag_set_of(latest.bearings) != tag_set_of(obs.bearings);
        event.similarity = similarity_intersection(latest.bearings, obs.bearings);
        if (!should_add_state(obs.t - latest.t, changed, event.similarity,
                              config.min_state_interval, config.similarity_threshold)) {
            event.added = false;
            return event;
        }
    }

    event.added = true;
    window.add_state(obs, pending, phi);

    if (window.size() > window.config().max_states) {
        EvictionFlag flag = window.flag();
        if (config.mode != PolicyConfig::Mode::Flexible) flag = EvictionFlag::FIFO;
        const int target = flag == EvictionFlag::FIFO
                               ? window.oldest().id
                               : window.states()[window.states().size() - 2].id;
        event.evicted_state = target;
        event.eviction_flag_used = flag;

        if (config.mode == PolicyConfig::Mode::Off) {
            // Ablation: drop the state and its measurements without a prior.
            window.detach_aoa_factors_of_state(target);
            window.detach_odom_factors_of_state(target);
            for (int tag : window.tags_only_observed_by(target)) {
                event.removed_tags.push_back(tag);
                window.erase_tag(tag);
            }
            window.prior().drop(state_key(target));
            window.erase_state(target);
            // Re-anchor the gauge on the new oldest state at its estimate.
            const RobotNode& anchor = window.oldest();
            if (!window.prior().contains(state_key(anchor.id))) {
                window.prior().add_information(
                    state_key(anchor.id), state_key(anchor.id),
                    config.off_mode_anchor_weight * Eigen::Matrix2d::Identity());
                window.prior().add_eta(state_key(anchor.id),
                                       config.off_mode_anchor_weight * anchor.mu.head<2>());
            }
            // Tags left without any live factor fall back to their last
            // estimate; drop them so the solve stays well posed.
            std::set<int> with_factors;
            for (const auto& f : window.aoa_factors()) with_factors.insert(f.tag_id);
            std::vector<int> orphaned;
            for (const auto& [tag_id, tag] : window.tags()) {
                if (with_factors.count(tag_id) == 0) orphaned.push_back(tag_id);
            }
            for (int tag_id : orphaned) {
                event.removed_tags.push_back(tag_id);
                window.erase_tag(tag_id);
            }
        } else {
            auto marg = marginalize(window, target);
            event.removed_tags = std::move(marg.removed_tags);
            event.degenerate_ridge = marg.ridge_applied;
        }
    }

    // Flag for the next step from the two newest remaining observations.
    if (config.mode == PolicyConfig::Mode::Flexible && window.size() >= 2) {
        const auto& newest = window.newest();
        const auto& second = window.states()[window.states().size() - 2];
        const bool changed2 =
            tag_set_of(newest.bearings) != tag_set_of(second.bearings);
        const double m2 = similarity_intersection(second.bearings, newest.bearings);
        window.set_flag((m2 > config.similarity_threshold || changed2) ? EvictionFlag::FIFO
                                                                       : EvictionFlag::LIFO);
    } else {
        window.set_flag(EvictionFlag::FIFO);
    }
    event.flag = window.flag();

    event.solve = window.solve();
    return event;
}

}  // namespace rover::slam
