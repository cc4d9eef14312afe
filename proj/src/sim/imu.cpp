#include "rover/sim/imu.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "rover/core/angles.hpp"

namespace rover::sim {

std::vector<ImuSample> sample_imu(const Trajectory& trajectory, const NoiseConfig& noise,
                                  std::uint64_t seed, double mag_rate,
                                  double mag_declination) {
    noise.validate();
    if (trajectory.size() < 2) throw std::invalid_argument("trajectory too short to sample");

    const double dt = trajectory[1].t - trajectory[0].t;
    const double sqrt_rate = std::sqrt(1.0 / dt);
    const double gyro_sigma = noise.gyro_noise_density * sqrt_rate;
    const double accel_sigma = noise.accel_noise_density * sqrt_rate;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const int mag_stride =
        std::max(1, static_cast<int>(std::llround(1.0 / (mag_rate * dt))));

    std::vector<ImuSample> out;
    out.reserve(trajectory.size() - 1);
    for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
        const auto& a = trajectory[k];
        const auto& b = trajectory[k + 1];
        ImuSample s;
        s.t = a.t;

        const double dheading = angle_diff(b.heading, a.heading);
        s.omega = Eigen::Vector3d(0.0, 0.0, dheading / dt);

        // Specific force: world acceleration rotated into the body frame at
        // the sample start, plus gravity along +z.
        const Eigen::Vector2d aw = a.acceleration;
        const double c = std::cos(a.heading), sn = std::sin(a.heading);
        s.accel = Eigen::Vector3d(c * aw.x() + sn * aw.y(),
                                  -sn * aw.x() + c * aw.y(), kGravity);

        if (gyro_sigma > 0.0 || noise.gyro_bias != 0.0) {
            s.omega += Eigen::Vector3d(gyro_sigma * gauss(rng), gyro_sigma * gauss(rng),
                                       gyro_sigma * gauss(rng) + noise.gyro_bias);
        }
        if (accel_sigma > 0.0) {
            s.accel += Eigen::Vector3d(accel_sigma * gauss(rng), accel_sigma * gauss(rng),
                                       accel_sigma * gauss(rng));
        }
        if (k % static_cast<std::size_t>(mag_stride) == 0) {
            double m = a.heading + mag_declination;
            if (noise.mag_heading_noise > 0.0) m += noise.mag_heading_noise * gauss(rng);
            s.mag_heading = wrap_2pi(m);
        }
        out.push_back(s);
    }
    return out;
}

double true_bearing(const Eigen::Vector2d& robot_pos, double heading,
                    const Eigen::Vector2d& tag_pos) {
    const Eigen::Vector2d d = tag_pos - robot_pos;
    if (d.squaredNorm() == 0.0) {
        throw std::invalid_argument("bearing undefined: robot and tag coincide");
    }
    return wrap_2pi(std::atan2(d.y(), d.x()) - heading);
}

}  // namespace rover::sim
