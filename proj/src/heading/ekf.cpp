#include "rover/heading/ekf.hpp"

#include <cmath>
#include <stdexcept>

#include "rover/core/angles.hpp"

namespace rover::heading {

HeadingEkf::HeadingEkf(const EkfConfig& config, double initial_phi)
    : cfg_(config), initial_phi_(initial_phi) {
    state_.phi = wrap_2pi(initial_phi);
    state_.P = Eigen::Vector2d(cfg_.init_phi_var, cfg_.init_bias_var).asDiagonal();
}

void HeadingEkf::predict(double omega_z, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("predict: dt must be positive");
    state_.phi = wrap_2pi(state_.phi + (omega_z - state_.gyro_bias) * dt);

    Eigen::Matrix2d F = Eigen::Matrix2d::Identity();
    F(0, 1) = -dt;
    Eigen::Matrix2d Q = Eigen::Matrix2d::Zero();
    Q(0, 0) = cfg_.gyro_noise * cfg_.gyro_noise * dt;
    Q(1, 1) = cfg_.bias_walk * cfg_.bias_walk * dt;
    state_.P = F * state_.P * F.transpose() + Q;
}

void HeadingEkf::update_mag(double mag_heading) {
    const double predicted = state_.phi + declination_;
    const double innovation = angle_diff(mag_heading, predicted);

    const double r = cfg_.mag_noise * cfg_.mag_noise;
    const double s = state_.P(0, 0) + r;
    const Eigen::Vector2d gain = state_.P.col(0) / s;

    state_.phi = wrap_2pi(state_.phi + gain(0) * innovation);
    state_.gyro_bias += gain(1) * innovation;

    Eigen::Matrix2d ikh = Eigen::Matrix2d::Identity();
    ikh(0, 0) -= gain(0);
    ikh(1, 0) -= gain(1);
    state_.P = ikh * state_.P;
    state_.P = 0.5 * (state_.P + state_.P.transpose()).eval();
}

void HeadingEkf::align(double mag_heading, double t) {
    if (aligned_) {
        update_mag(mag_heading);
        return;
    }
    if (align_start_ < 0.0) align_start_ = t;
    align_sum_ += angle_diff(mag_heading, initial_phi_);
    ++align_count_;
    if (t - align_start_ >= alignment_window && align_count_ > 0) {
        declination_ = align_sum_ / static_cast<double>(align_count_);
        aligned_ = true;
    }
}

Eigen::Matrix3d rotation_about_z(double phi) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    const double c = std::cos(phi), s = std::sin(phi);
    r(0, 0) = c;
    r(0, 1) = -s;
    r(1, 0) = s;
    r(1, 1) = c;
    return r;
}

}  // namespace rover::heading
