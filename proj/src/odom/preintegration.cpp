#include "rover/odom/preintegration.hpp"

#include <cmath>
#include <stdexcept>

namespace rover::odom {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
    Eigen::Matrix3d s;
    s << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    return s;
}

// One polar-decomposition Newton step; enough to hold orthonormality at
// ~1e-12 for the small per-sample drift of the first-order update.
Eigen::Matrix3d reorthonormalize(const Eigen::Matrix3d& r) {
    return 1.5 * r - 0.5 * r * r.transpose() * r;
}

const Eigen::Vector3d kGravityVec(0.0, 0.0, sim::kGravity);

}  // namespace

PreintegratedOdometry::PreintegratedOdometry(const PreintConfig& config) : cfg_(config) {}

void PreintegratedOdometry::update(const Eigen::Vector3d& omega, const Eigen::Vector3d& accel,
                                   double dt) {
    if (dt <= 0.0) throw std::invalid_argument("preintegration dt must be positive");

    const double sigma2 = cfg_.accel_noise_density * cfg_.accel_noise_density / dt;
    const Eigen::Matrix3d noise = sigma2 * Eigen::Matrix3d::Identity();
    const double dt2 = dt * dt;
    lambda_t_ += dt * (cov_tv_ + cov_tv_.transpose()) + dt2 * lambda_v_ + dt2 * dt2 * noise;
    cov_tv_ += dt * lambda_v_ + dt * dt2 * noise;
    lambda_v_ += dt2 * noise;

    const Eigen::Vector3d rotated = rot_ * accel;
    trans_ += vel_ * dt + rotated * dt2;
    gravity_trans_coeff_ += gravity_vel_coeff_ * dt + dt2;
    vel_ += rotated * dt;
    gravity_vel_coeff_ += dt;
    rot_ = reorthonormalize(rot_ * (Eigen::Matrix3d::Identity() + skew(omega) * dt));

    ++count_;
    t_end_ += dt;
    nominal_dt_ = dt;
}

void PreintegratedOdometry::update(const sim::ImuSample& sample, double dt) {
    if (count_ == 0) {
        t_start_ = sample.t;
        t_end_ = sample.t;
    }
    update(sample.omega, sample.accel, dt);
}

Eigen::Matrix3d PreintegratedOdometry::lambda() const {
    const Eigen::Matrix3d sym = 0.5 * (lambda_t_ + lambda_t_.transpose());
    return (1.0 + cfg_.gyro_inflation) * sym;
}

void PreintegratedOdometry::set_time_span(double t_start, double t_end) {
    t_start_ = t_start;
    t_end_ = t_end;
}

void PreintegratedOdometry::concatenate(const PreintegratedOdometry& other) {
    if (other.empty()) {
        t_end_ = std::max(t_end_, other.t_end_);
        return;
    }
    if (!empty() && nominal_dt_ > 0.0 &&
        std::abs(other.t_start_ - t_end_) > 1.5 * nominal_dt_) {
        throw std::invalid_argument("cannot concatenate preintegrations across a gap");
    }
    if (empty()) t_start_ = other.t_start_;

    const double dtb = other.gravity_vel_coeff_;
    lambda_t_ = lambda_t_ + dtb * (cov_tv_ + cov_tv_.transpose()) + dtb * dtb * lambda_v_ +
                rot_ * other.lambda_t_ * rot_.transpose();
    cov_tv_ = cov_tv_ + dtb * lambda_v_ + rot_ * other.cov_tv_ * rot_.transpose();
    lambda_v_ = lambda_v_ + rot_ * other.lambda_v_ * rot_.transpose();

    trans_ = trans_ + vel_ * dtb + rot_ * other.trans_;
    gravity_trans_coeff_ = gravity_trans_coeff_ + gravity_vel_coeff_ * dtb +
                           other.gravity_trans_coeff_;
    vel_ = vel_ + rot_ * other.vel_;
    gravity_vel_coeff_ += other.gravity_vel_coeff_;
    rot_ = rot_ * other.rot_;

    count_ += other.count_;
    t_end_ = other.t_end_;
    nominal_dt_ = other.nominal_dt_;
}

PreintegratedOdometry preintegrate(const std::vector<sim::ImuSample>& samples, double t_end,
                                   const PreintConfig& config) {
    if (samples.empty()) throw std::invalid_argument("preintegrate: empty sample buffer");
    PreintegratedOdometry p(config);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double next_t = i + 1 < samples.size() ? samples[i + 1].t : t_end;
        const double dt = next_t - samples[i].t;
        if (dt <= 0.0) {
            throw std::invalid_argument("preintegrate: timestamps must be increasing");
        }
        p.update(samples[i], dt);
    }
    return p;
}

Eigen::Vector3d propagate_position(const Eigen::Vector3d& mu_k, const Eigen::Vector3d& nu_k,
                                   const Eigen::Matrix3d& rot_k_to_world,
                                   const PreintegratedOdometry& preint) {
    return mu_k + rot_k_to_world * (nu_k * preint.dt_total() -
                                    kGravityVec * preint.gravity_trans_coeff() +
                                    preint.translation_sum());
}

Eigen::Vector3d propagate_velocity(const Eigen::Vector3d& nu_k,
                                   const Eigen::Matrix3d& rot_k_to_k1,
                                   const PreintegratedOdometry& preint) {
    return rot_k_to_k1 * (nu_k - kGravityVec * preint.gravity_vel_coeff() +
                          preint.velocity_sum());
}

}  // namespace rover::odom
