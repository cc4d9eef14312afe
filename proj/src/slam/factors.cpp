#include <Eigen/Dense>

#include "rover/heading/ekf.hpp"
#include "rover/slam/window.hpp"

namespace rover::slam {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d s;
    s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return s;
}

const Eigen::Vector3d kGravityVec(0.0, 0.0, sim::kGravity);

}  // namespace

AoaResidual make_aoa_residual(const AoaFactor& factor, const Window& window) {
    const RobotNode& node = window.node(factor.state_id);
    const TagNode& tag = window.tags().at(factor.tag_id);
    AoaResidual out;
    out.residual = factor.r_world.cross(tag.b - node.mu);
    out.j_tag = skew(factor.r_world);
    out.j_state = -out.j_tag;
    return out;
}

OdomResidual make_odometry_residual(const OdomFactor& factor, const Window& window) {
    const RobotNode& a = window.node(factor.state_a);
    const RobotNode& b = window.node(factor.state_b);
    const Eigen::Matrix3d rot_world_to_a = heading::rotation_about_z(a.phi).transpose();

    OdomResidual out;
    out.rhs = factor.preint.translation_sum() + a.nu * factor.preint.dt_total() -
              kGravityVec * factor.preint.gravity_trans_coeff();
    out.residual = out.rhs - rot_world_to_a * (b.mu - a.mu);
    out.j_state_a = rot_world_to_a;
    out.j_state_b = -rot_world_to_a;
    return out;
}

}  // namespace rover::slam
