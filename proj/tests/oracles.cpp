#include "oracles.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rover::oracles {

Eigen::Matrix3d rotation_exponential(const Eigen::Vector3d& omega, double t) {
    const double angle = omega.norm() * t;
    if (angle < 1e-14) return Eigen::Matrix3d::Identity();
    const Eigen::Vector3d axis = omega.normalized();
    Eigen::Matrix3d k;
    k << 0.0, -axis.z(), axis.y(), axis.z(), 0.0, -axis.x(), -axis.y(), axis.x(), 0.0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * k +
           (1.0 - std::cos(angle)) * k * k;
}

DiscreteSums discrete_sum_reference(const std::vector<Eigen::Vector3d>& omegas,
                                    const std::vector<Eigen::Vector3d>& accels, double dt) {
    if (omegas.size() != accels.size()) throw std::invalid_argument("size mismatch");
    DiscreteSums s;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const Eigen::Vector3d ra = s.rot * accels[i];
        s.trans += s.vel * dt + ra * dt * dt;
        s.vel += ra * dt;
        // First-order update then projection to the nearest rotation via SVD
        // (a different orthonormalization route than the library's).
        Eigen::Matrix3d k;
        const Eigen::Vector3d w = omegas[i];
        k << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
        Eigen::Matrix3d raw = s.rot * (Eigen::Matrix3d::Identity() + k * dt);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(raw,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();
        s.rot = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return s;
}

std::vector<Eigen::Vector2d> double_integrate(const std::vector<Eigen::Vector2d>& accel,
                                              const Eigen::Vector2d& p0,
                                              const Eigen::Vector2d& v0, double dt) {
    std::vector<Eigen::Vector2d> positions;
    positions.reserve(accel.size() + 1);
    Eigen::Vector2d p = p0, v = v0;
    positions.push_back(p);
    for (const auto& a : accel) {
        p += v * dt + 0.5 * a * dt * dt;
        v += a * dt;
        positions.push_back(p);
    }
    return positions;
}

Eigen::Vector2d two_ray_intersection(const Eigen::Vector2d& p0, double bearing0,
                                     const Eigen::Vector2d& p1, double bearing1) {
    const Eigen::Vector2d d0(std::cos(bearing0), std::sin(bearing0));
    const Eigen::Vector2d d1(std::cos(bearing1), std::sin(bearing1));
    Eigen::Matrix2d m;
    m << d0.x(), -d1.x(), d0.y(), -d1.y();
    if (std::abs(m.determinant()) < 1e-12) {
        throw std::invalid_argument("rays are parallel");
    }
    const Eigen::Vector2d st = m.inverse() * (p1 - p0);
    return p0 + st.x() * d0;
}

Eigen::VectorXd qr_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    return a.colPivHouseholderQr().solve(b);
}

Eigen::MatrixXd numeric_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd j(f0.size(), x.size());
    for (int c = 0; c < x.size(); ++c) {
        Eigen::VectorXd hi = x, lo = x;
        hi(c) += step;
        lo(c) -= step;
        j.col(c) = (f(hi) - f(lo)) / (2.0 * step);
    }
    return j;
}

}  // namespace rover::oracles
