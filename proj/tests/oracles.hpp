#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they check.

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "rover/sim/imu.hpp"

namespace rover::oracles {

/// Rodrigues closed form exp([w]x * t).
Eigen::Matrix3d rotation_exponential(const Eigen::Vector3d& omega, double t);

/// Plain-scalar re-implementation of the preintegration sums over a sample
/// stream (V before the current sample in the translation term).
struct DiscreteSums {
    Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
    Eigen::Vector3d vel = Eigen::Vector3d::Zero();
    Eigen::Vector3d trans = Eigen::Vector3d::Zero();
};
DiscreteSums discrete_sum_reference(const std::vector<Eigen::Vector3d>& omegas,
                                    const std::vector<Eigen::Vector3d>& accels, double dt);

/// Trapezoid double integration of sampled world accelerations.
std::vector<Eigen::Vector2d> double_integrate(const std::vector<Eigen::Vector2d>& accel,
                                              const Eigen::Vector2d& p0,
                                              const Eigen::Vector2d& v0, double dt);

/// Intersection of rays p0 + s*d0 and p1 + t*d1 (planar). Throws when the
/// rays are parallel.
Eigen::Vector2d two_ray_intersection(const Eigen::Vector2d& p0, double bearing0,
                                     const Eigen::Vector2d& p1, double bearing1);

/// Dense weighted least squares by column-pivoted QR over stacked whitened
/// rows (an algebraic route independent of normal equations + Cholesky).
Eigen::VectorXd qr_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Central-difference Jacobian of a vector residual.
Eigen::MatrixXd numeric_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step = 1e-6);

}  // namespace rover::oracles
