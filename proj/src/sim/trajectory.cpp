#include "rover/sim/trajectory.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rover/core/angles.hpp"

namespace rover::sim {
namespace {

// Emits whole primitives (ramped straights, in-place rotations, holds) on a
// fixed dt grid. Positions are advanced with the trapezoid rule over the
// velocity series, which is exact for the piecewise-linear speed profiles
// used here.
class PathBuilder {
  public:
    PathBuilder(double dt, const Eigen::Vector2d& start, double heading)
        : dt_(dt), pos_(start), heading_(heading) {
        push_sample();
    }

    double time() const { return static_cast<double>(steps_) * dt_; }
    double speed() const { return speed_; }
    int steps_for(double seconds) const {
        return std::max(1, static_cast<int>(std::round(seconds / dt_)));
    }

    void hold(int steps) {
        for (int i = 0; i < steps; ++i) step(0.0, 0.0);
    }

    void hold_until(double t_end) {
        while (time() < t_end - 0.5 * dt_) step(0.0, 0.0);
    }

    void rotate(double delta, double rate) {
        if (delta == 0.0) return;
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(delta) / (rate * dt_))));
        const double per_step = delta / static_cast<double>(n);
        for (int i = 0; i < n; ++i) step(0.0, per_step);
    }

    /// Ramp the forward speed linearly to `target` at acceleration `accel`.
    void ramp_speed(double target, double accel) {
        const double dv = target - speed_;
        if (dv == 0.0) return;
        const int n = std::max(1, static_cast<int>(std::ceil(std::abs(dv) / (accel * dt_))));
        const double per_step = dv / static_cast<double>(n);
        for (int i = 0; i < n; ++i) step(per_step, 0.0);
    }

    void cruise(int steps) {
        for (int i = 0; i < steps; ++i) step(0.0, 0.0);
    }

    /// Straight segment covering exactly `dist` along the current heading,
    /// starting and ending at rest: ramp up, cruise, ramp down.
    void straight(double dist, double cruise_speed, double accel) {
        if (dist <= 0.0) return;
        int n_ramp = std::max(1, static_cast<int>(std::round(cruise_speed / (accel * dt_))));
        // Trapezoid distance: v * dt * (n_ramp + n_cruise).
        int n_cruise = static_cast<int>(std::round(dist / (cruise_speed * dt_))) - n_ramp;
        if (n_cruise < 0) {
            n_cruise = 0;
            n_ramp = std::max(1, static_cast<int>(std::round(
                                     std::sqrt(dist / (accel * dt_ * dt_)))));
        }
        const double v = dist / (dt_ * static_cast<double>(n_ramp + n_cruise));
        const double dv = v / static_cast<double>(n_ramp);
        for (int i = 0; i < n_ramp; ++i) step(dv, 0.0);
        for (int i = 0; i < n_cruise; ++i) step(0.0, 0.0);
        for (int i = 0; i < n_ramp; ++i) step(-dv, 0.0);
        speed_ = 0.0;  // kill rounding residue so rest segments are exact
    }

    /// Turn toward `target_heading`, then ramp to `target_speed`.
    void transition(double target_speed, double target_heading, double accel, double turn_rate) {
        const double turn = angle_diff(target_heading, heading_);
        if (turn != 0.0) {
            if (speed_ != 0.0) ramp_speed(0.0, accel);
            rotate(turn, turn_rate);
        }
        ramp_speed(target_speed, accel);
    }

    /// Teleports the initial state onto a moving profile (used when a
    /// top-level profile starts mid-cruise).
    void set_initial_speed(double v) {
        speed_ = v;
        samples_.front().velocity = v * dir();
    }

    Trajectory finish(double duration) {
        const auto want = static_cast<std::size_t>(std::llround(duration / dt_)) + 1;
        while (samples_.size() < want) step(0.0, 0.0);
        samples_.resize(want);
        // Store accelerations as exact forward differences of the velocity
        // column; the last sample repeats zero.
        for (std::size_t k = 0; k + 1 < samples_.size(); ++k) {
            samples_[k].acceleration =
                (samples_[k + 1].velocity - samples_[k].velocity) / dt_;
        }
        samples_.back().acceleration.setZero();
        return std::move(samples_);
    }

  private:
    Eigen::Vector2d dir() const {
        return {std::cos(heading_), std::sin(heading_)};
    }

    void step(double dv, double dheading) {
        const double v0 = speed_;
        speed_ += dv;
        if (dheading != 0.0) {
            heading_ = wrap_2pi(heading_ + dheading);
        }
        pos_ += dir() * (0.5 * (v0 + speed_) * dt_);
        ++steps_;
        push_sample();
    }

    void push_sample() {
        TrajectorySample s;
        s.t = time();
        s.position = pos_;
        s.heading = wrap_2pi(heading_);
        s.velocity = speed_ * dir();
        samples_.push_back(s);
    }

    double dt_;
    Eigen::Vector2d pos_;
    double heading_;
    double speed_ = 0.0;
    std::size_t steps_ = 0;
    Trajectory samples_;
};

void emit_profile(PathBuilder& b, const MotionProfile& profile, double t_end);

void emit_generic(PathBuilder& b, const GenericProfile& p, double t_end) {
    std::mt19937_64 rng(p.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    while (b.time() < t_end) {
        const double speed = 0.15 + u01(rng) * (p.max_speed - 0.15);
        const double dist = 0.8 + 2.2 * u01(rng);
        const double turn = (u01(rng) * 2.0 - 1.0) * 2.4;
        // Rough time the next segment will need; fall back to holding still
        // when it no longer fits the budget.
        const double need = dist / speed + 2.0 * speed / p.linear_accel +
                            std::abs(turn) / p.turn_rate;
        if (b.time() + need > t_end) break;
        b.straight(dist, speed, p.linear_accel);
        b.rotate(turn, p.turn_rate);
        if (u01(rng) < 0.25) {
            b.hold(b.steps_for(0.4));
        }
    }
    b.hold_until(t_end);
}

void emit_rectangle(PathBuilder& b, const RectangleProfile& p, double t_end) {
    const double sides[4] = {p.width, p.height, p.width, p.height};
    while (b.time() < t_end) {
        for (int leg = 0; leg < 4 && b.time() < t_end; ++leg) {
            b.straight(sides[leg], p.speed, p.linear_accel);
            b.rotate(std::numbers::pi / 2.0, p.turn_rate);
        }
    }
}

void emit_profile(PathBuilder& b, const MotionProfile& profile, double t_end) {
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, StationaryProfile>) {
                if (b.speed() != 0.0) b.ramp_speed(0.0, 0.5);
                b.hold_until(t_end);
            } else if constexpr (std::is_same_v<T, ConstantVelocityProfile>) {
                b.transition(p.speed, p.heading, 0.5, 1.2);
                while (b.time() < t_end - 1e-9) b.cruise(1);
            } else if constexpr (std::is_same_v<T, RectangleProfile>) {
                emit_rectangle(b, p, t_end);
            } else if constexpr (std::is_same_v<T, GenericProfile>) {
                emit_generic(b, p, t_end);
            } else if constexpr (std::is_same_v<T, CompositeProfile>) {
                double t = b.time();
                for (const auto& [sub, dur] : p.segments) {
                    t += dur;
                    emit_profile(b, sub, std::min(t, t_end));
                }
            }
        },
        profile);
}

}  // namespace

Trajectory generate_trajectory(const MotionProfile& profile, double duration, double dt,
                               const Eigen::Vector2d& start, double start_heading) {
    if (duration <= 0.0) throw std::invalid_argument("trajectory duration must be > 0");
    if (dt <= 0.0) throw std::invalid_argument("trajectory dt must be > 0");
    if (const auto* rect = std::get_if<RectangleProfile>(&profile)) {
        if (rect->width <= 0.0 || rect->height <= 0.0) {
            throw std::invalid_argument("rectangle sides must be positive");
        }
    }
    PathBuilder b(dt, start, start_heading);
    if (const auto* cv = std::get_if<ConstantVelocityProfile>(&profile)) {
        // A standalone constant-velocity run starts mid-cruise.
        PathBuilder moving(dt, start, cv->heading);
        moving.set_initial_speed(cv->speed);
        while (moving.time() < duration - 1e-9) moving.cruise(1);
        return moving.finish(duration);
    }
    emit_profile(b, profile, duration);
    return b.finish(duration);
}

double path_length(const Trajectory& traj) {
    double len = 0.0;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        len += (traj[k + 1].position - traj[k].position).norm();
    }
    return len;
}

}  // namespace rover::sim
