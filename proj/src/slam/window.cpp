#include "rover/slam/window.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rover/core/angles.hpp"
#include "rover/core/errors.hpp"
#include "rover/heading/ekf.hpp"

namespace rover::slam {

namespace {
constexpr double kMinOmegaVar = 1e-8;     // rad^2 floor for AoA weights
constexpr double kMinLambdaDiag = 1e-10;  // m^2 floor for odometry weights
}  // namespace

Window::Window(const WindowConfig& config) : cfg_(config) {
    if (cfg_.max_states < 2) throw std::invalid_argument("window size must be >= 2");
}

const RobotNode& Window::node(int state_id) const {
    for (const auto& s : states_) {
        if (s.id == state_id) return s;
    }
    throw std::out_of_range("state not in window: " + std::to_string(state_id));
}

RobotNode& Window::node(int state_id) {
    return const_cast<RobotNode&>(std::as_const(*this).node(state_id));
}

int Window::add_state(const aoa::AoaObservation& obs, const odom::PreintegratedOdometry& preint,
                      double phi) {
    RobotNode n;
    n.id = next_state_id_++;
    n.t = obs.t;
    n.phi = phi;
    n.bearings = obs.bearings;

    if (states_.empty()) {
        // The window origin: mu_0 = 0, pinned by a strong prior.
        prior_.add_information(state_key(n.id), state_key(n.id),
                               cfg_.origin_anchor_weight * Eigen::Matrix2d::Identity());
    } else {
        const RobotNode& prev = states_.back();
        const Eigen::Matrix3d rot_prev = heading::rotation_about_z(prev.phi);
        n.mu = odom::propagate_position(prev.mu, prev.nu, rot_prev, preint);
        n.nu = odom::propagate_velocity(
            prev.nu, heading::rotation_about_z(prev.phi - phi), preint);
        n.mu.z() = 0.0;  // planar
        n.nu.z() = 0.0;
        OdomFactor f;
        f.state_a = prev.id;
        f.state_b = n.id;
        f.preint = preint;
        odom_factors_.push_back(std::move(f));
    }
    states_.push_back(n);

    for (const auto& [tag_id, bearing] : obs.bearings) {
        auto it = tags_.find(tag_id);
        if (it == tags_.end()) {
            TagNode tag;
            tag.b = n.mu + cfg_.initial_tag_distance *
                               Eigen::Vector3d(std::cos(bearing), std::sin(bearing), 0.0);
            tag.first_seen_state = n.id;
            tag.obs_count = 1;
            it = tags_.emplace(tag_id, tag).first;
        } else {
            ++it->second.obs_count;
            if (it->second.obs_count >= 2) it->second.published = true;
        }
        AoaFactor f;
        f.state_id = n.id;
        f.tag_id = tag_id;
        f.r_world = Eigen::Vector3d(std::cos(bearing), std::sin(bearing), 0.0);
        const auto var_it = obs.variances.find(tag_id);
        f.omega_var = var_it != obs.variances.end() ? var_it->second : kMinOmegaVar;
        aoa_factors_.push_back(f);
    }
    return n.id;
}

std::vector<VarKey> Window::variable_order() const {
    std::vector<VarKey> order;
    order.reserve(states_.size() + tags_.size());
    for (const auto& s : states_) order.push_back(state_key(s.id));
    for (const auto& [id, tag] : tags_) {
        if (tag.published) order.push_back(tag_key(id));
    }
    return order;
}

std::vector<int> Window::tags_only_observed_by(int state_id) const {
    std::map<int, std::pair<int, int>> live;  // tag -> (factors on state, total)
    for (const auto& f : aoa_factors_) {
        auto& [on_state, total] = live[f.tag_id];
        ++total;
        if (f.state_id == state_id) ++on_state;
    }
    std::vector<int> out;
    for (const auto& [tag, counts] : live) {
        if (counts.first > 0 && counts.first == counts.second) out.push_back(tag);
    }
    return out;
}

void Window::erase_state(int state_id) {
    states_.erase(std::remove_if(states_.begin(), states_.end(),
                                 [&](const RobotNode& s) { return s.id == state_id; }),
                  states_.end());
}

void Window::erase_tag(int tag_id) {
    tags_.erase(tag_id);
    aoa_factors_.erase(std::remove_if(aoa_factors_.begin(), aoa_factors_.end(),
                                      [&](const AoaFactor& f) { return f.tag_id == tag_id; }),
                       aoa_factors_.end());
}

std::vector<AoaFactor> Window::detach_aoa_factors_of_state(int state_id) {
    std::vector<AoaFactor> out;
    auto it = std::stable_partition(aoa_factors_.begin(), aoa_factors_.end(),
                                    [&](const AoaFactor& f) { return f.state_id != state_id; });
    out.assign(it, aoa_factors_.end());
    aoa_factors_.erase(it, aoa_factors_.end());
    return out;
}

std::vector<OdomFactor> Window::detach_odom_factors_of_state(int state_id) {
    std::vector<OdomFactor> out;
    auto it = std::stable_partition(odom_factors_.begin(), odom_factors_.end(),
                                    [&](const OdomFactor& f) {
                                        return f.state_a != state_id && f.state_b != state_id;
                                    });
    out.assign(std::make_move_iterator(it), std::make_move_iterator(odom_factors_.end()));
    odom_factors_.erase(it, odom_factors_.end());
    return out;
}

void Window::repropagate_velocities() {
    for (std::size_t i = 1; i < states_.size(); ++i) {
        RobotNode& cur = states_[i];
        const RobotNode& prev = states_[i - 1];
        const OdomFactor* factor = nullptr;
        for (const auto& f : odom_factors_) {
            if (f.state_a == prev.id && f.state_b == cur.id) {
                factor = &f;
                break;
            }
        }
        if (factor == nullptr) continue;
        cur.nu = odom::propagate_velocity(
            prev.nu, heading::rotation_about_z(prev.phi - cur.phi), factor->preint);
        cur.nu.z() = 0.0;
    }
}

SolveStats Window::solve() {
    if (states_.empty()) throw std::invalid_argument("solve on an empty window");

    SolveStats stats;
    const std::vector<VarKey> order = variable_order();
    const int dim = 2 * static_cast<int>(order.size());
    const auto col_of = [&](const VarKey& key) {
        const auto it = std::find(order.begin(), order.end(), key);
        return it == order.end() ? -1 : 2 * static_cast<int>(it - order.begin());
    };

    Eigen::VectorXd estimate(dim);
    const auto read_estimate = [&]() {
        int c = 0;
        for (const auto& s : states_) {
            estimate.segment<2>(c) = s.mu.head<2>();
            c += 2;
        }
        for (const auto& [id, tag] : tags_) {
            if (tag.published) {
                estimate.segment<2>(c) = tag.b.head<2>();
                c += 2;
            }
        }
    };
    const auto write_estimate = [&]() {
        int c = 0;
        for (auto& s : states_) {
            s.mu.head<2>() = estimate.segment<2>(c);
            c += 2;
        }
        for (auto& [id, tag] : tags_) {
            if (tag.published) {
                tag.b.head<2>() = estimate.segment<2>(c);
                c += 2;
            }
        }
    };
    read_estimate();

    for (int iter = 0; iter < cfg_.max_solve_iterations; ++iter) {
        stats.iterations = iter + 1;
        repropagate_velocities();

        Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);

        for (const auto& f : aoa_factors_) {
            const auto tag_it = tags_.find(f.tag_id);
            if (tag_it == tags_.end() || !tag_it->second.published) continue;
            const int ct = col_of(tag_key(f.tag_id));
            const int cs = col_of(state_key(f.state_id));
            if (ct < 0 || cs < 0) continue;

            const RobotNode& s = node(f.state_id);
            const double range = std::max(
                cfg_.min_range_weight, (tag_it->second.b.head<2>() - s.mu.head<2>()).norm());
            const double w =
                1.0 / (range * range * std::max(f.omega_var, kMinOmegaVar));

            // z row of the cross product: -ry*bx + rx*by + ry*mx - rx*my = 0.
            const double rx = f.r_world.x(), ry = f.r_world.y();
            Eigen::Vector2d q_tag(-ry, rx);
            Eigen::Vector2d q_state(ry, -rx);
            normal.block<2, 2>(ct, ct) += w * q_tag * q_tag.transpose();
            normal.block<2, 2>(cs, cs) += w * q_state * q_state.transpose();
            normal.block<2, 2>(ct, cs) += w * q_tag * q_state.transpose();
            normal.block<2, 2>(cs, ct) += w * q_state * q_tag.transpose();
            // Homogeneous constraint: rhs contribution is zero.
        }

        for (const auto& f : odom_factors_) {
            const int ca = col_of(state_key(f.state_a));
            const int cb = col_of(state_key(f.state_b));
            if (ca < 0 || cb < 0) continue;
            const OdomResidual r = make_odometry_residual(f, *this);

            Eigen::Matrix2d lambda = f.preint.lambda().topLeftCorner<2, 2>();
            lambda.diagonal().array() += kMinLambdaDiag;
            const Eigen::Matrix2d weight = lambda.inverse();

            // Rows: R_0^a (mu_b - mu_a) = rhs_xy.
            const Eigen::Matrix2d ja = -r.j_state_a.topLeftCorner<2, 2>();  // on mu_a
            const Eigen::Matrix2d jb = -r.j_state_b.topLeftCorner<2, 2>();  // on mu_b
            const Eigen::Vector2d z = r.rhs.head<2>();
            normal.block<2, 2>(ca, ca) += ja.transpose() * weight * ja;
            normal.block<2, 2>(cb, cb) += jb.transpose() * weight * jb;
            normal.block<2, 2>(ca, cb) += ja.transpose() * weight * jb;
            normal.block<2, 2>(cb, ca) += jb.transpose() * weight * ja;
            rhs.segment<2>(ca) += ja.transpose() * weight * z;
            rhs.segment<2>(cb) += jb.transpose() * weight * z;
        }

        for (std::size_t a = 0; a < prior_.keys().size(); ++a) {
            const int ca = col_of(prior_.keys()[a]);
            if (ca < 0) {
                throw std::logic_error("prior references a variable outside the window: " +
                                       to_string(prior_.keys()[a]));
            }
            rhs.segment<2>(ca) += prior_.eta().segment<2>(2 * a);
            for (std::size_t b = 0; b < prior_.keys().size(); ++b) {
                const int cb = col_of(prior_.keys()[b]);
                normal.block<2, 2>(ca, cb) += prior_.gamma().block<2, 2>(2 * a, 2 * b);
            }
        }

        Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
        const double max_diag = std::max(normal.diagonal().maxCoeff(), 1e-300);
        const bool deficient = ldlt.info() != Eigen::Success ||
                               ldlt.vectorD().minCoeff() < 1e-12 * max_diag;
        if (deficient) {
            if (!cfg_.ridge_on_degeneracy) {
                // Name the unobservable directions from the small-eigenvalue
                // subspace.
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
                std::vector<std::string> dirs;
                for (int k = 0; k < dim; ++k) {
                    if (eig.eigenvalues()(k) < 1e-9 * max_diag) {
                        int worst = 0;
                        eig.eigenvectors().col(k).cwiseAbs().maxCoeff(&worst);
                        dirs.push_back(to_string(order[worst / 2]) +
                                       (worst % 2 == 0 ? " (x)" : " (y)"));
                    }
                }
                throw DegeneracyError("normal matrix is rank deficient", dirs);
            }
            Eigen::MatrixXd ridged = normal;
            ridged.diagonal().array() += cfg_.degeneracy_ridge * max_diag;
            ldlt.compute(ridged);
            stats.ridge_applied = true;
        }

        const Eigen::VectorXd solution = ldlt.solve(rhs);
        const double delta = (solution - estimate).cwiseAbs().maxCoeff();
        estimate = solution;
        write_estimate();
        if (delta < cfg_.convergence_tol) break;
    }

    // Final cost at the solution (prior part up to its constant).
    double cost = prior_.cost(order, estimate);
    for (const auto& f : aoa_factors_) {
        const auto tag_it = tags_.find(f.tag_id);
        if (tag_it == tags_.end() || !tag_it->second.published) continue;
        if (col_of(state_key(f.state_id)) < 0) continue;
        const AoaResidual r = make_aoa_residual(f, *this);
        const RobotNode& s = node(f.state_id);
        const double range = std::max(cfg_.min_range_weight,
                                      (tag_it->second.b.head<2>() - s.mu.head<2>()).norm());
        cost += r.residual.z() * r.residual.z() /
                (range * range * std::max(f.omega_var, kMinOmegaVar));
    }
    for (const auto& f : odom_factors_) {
        if (col_of(state_key(f.state_a)) < 0 || col_of(state_key(f.state_b)) < 0) continue;
        const OdomResidual r = make_odometry_residual(f, *this);
        Eigen::Matrix2d lambda = f.preint.lambda().topLeftCorner<2, 2>();
        lambda.diagonal().array() += kMinLambdaDiag;
        cost += r.residual.head<2>().dot(lambda.inverse() * r.residual.head<2>());
    }
    stats.cost = cost;
    return stats;
}

}  // namespace rover::slam
