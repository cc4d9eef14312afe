#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rover/core/angles.hpp"
#include "rover/sim/imu.hpp"
#include "rover/sim/scenario.hpp"
#include "rover/sim/trajectory.hpp"

using namespace rover;
using namespace rover::sim;

namespace {

NoiseConfig zero_noise() {
    NoiseConfig n;
    n.gyro_noise_density = 0.0;
    n.gyro_bias = 0.0;
    n.accel_noise_density = 0.0;
    n.mag_heading_noise = 0.0;
    n.aoa_direct_noise = 0.0;
    return n;
}

}  // namespace

TEST_CASE("stationary profile holds position and velocity") {
    const auto traj = generate_trajectory(StationaryProfile{}, 30.0, 0.01);
    REQUIRE(traj.size() == 3001);
    for (const auto& s : traj) {
        CHECK(s.position == Eigen::Vector2d::Zero());
        CHECK(s.velocity == Eigen::Vector2d::Zero());
        CHECK(s.heading == 0.0);
    }
}

TEST_CASE("constant velocity covers speed * duration with zero acceleration") {
    const auto traj = generate_trajectory(ConstantVelocityProfile{0.1, 0.0}, 10.0, 0.005);
    const Eigen::Vector2d net = traj.back().position - traj.front().position;
    CHECK(net.x() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(net.y() == doctest::Approx(0.0));
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        CHECK(traj[k].acceleration.norm() == doctest::Approx(0.0));
        CHECK(traj[k].velocity.x() == doctest::Approx(0.1));
    }
}

TEST_CASE("rectangle path length matches its perimeter") {
    // Perimeter 2*(12.0 + 8.98) = 41.96 m, one full circuit.
    RectangleProfile rect{12.0, 8.98, 0.25};
    // Leg time is dist/speed plus one ramp of overhead (speed/accel).
    const double circuit_time = 41.96 / 0.25 + 4.0 * ((std::numbers::pi / 2) / rect.turn_rate) +
                                4.0 * (0.25 / rect.linear_accel);
    const auto traj = generate_trajectory(rect, circuit_time, 0.005);
    CHECK(path_length(traj) == doctest::Approx(41.96).epsilon(0.25 * 0.005 / 41.96 + 1e-6));
    // Headings follow the path tangent on every moving sample.
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        if (traj[k].velocity.norm() > 1e-9) {
            const double tangent = std::atan2(traj[k].velocity.y(), traj[k].velocity.x());
            CHECK(std::abs(angle_diff(traj[k].heading, tangent)) < 1e-9);
        }
    }
}

TEST_CASE("rectangle with nonpositive sides is rejected") {
    CHECK_THROWS_AS(generate_trajectory(RectangleProfile{0.0, 5.0, 0.2}, 10.0, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_trajectory(RectangleProfile{5.0, -1.0, 0.2}, 10.0, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_trajectory(StationaryProfile{}, -1.0, 0.01),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_trajectory(StationaryProfile{}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("trajectory is kinematically consistent") {
    const auto traj =
        generate_trajectory(GenericProfile{.seed = 7}, 12.0, 0.005, {1.0, -2.0}, 0.3);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        const double dt = traj[k + 1].t - traj[k].t;
        // velocity = d(position)/dt to trapezoid order (exact for the
        // piecewise-linear speed profiles used by the builder).
        const Eigen::Vector2d mid = 0.5 * (traj[k].velocity + traj[k + 1].velocity);
        CHECK((traj[k + 1].position - traj[k].position - mid * dt).norm() < 1e-12);
        // acceleration = d(velocity)/dt exactly.
        const Eigen::Vector2d dv = traj[k + 1].velocity - traj[k].velocity;
        CHECK((dv / dt - traj[k].acceleration).norm() < 1e-9);
    }
}

TEST_CASE("stationary imu reads gravity only") {
    const auto traj = generate_trajectory(StationaryProfile{}, 2.0, 0.01);
    const auto imu = sample_imu(traj, zero_noise(), 1);
    for (const auto& s : imu) {
        CHECK(s.accel.x() == doctest::Approx(0.0));
        CHECK(s.accel.y() == doctest::Approx(0.0));
        CHECK(s.accel.z() == doctest::Approx(9.8));
        CHECK(s.omega.norm() == doctest::Approx(0.0));
    }
}

TEST_CASE("gyro z equals the heading rate") {
    // In-place rotation at a constant rate appears directly on gyro z.
    CompositeProfile p;
    p.segments.emplace_back(StationaryProfile{}, 10.0);
    auto traj = generate_trajectory(p, 10.0, 0.01);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        traj[k].heading = rover::wrap_2pi(0.1 * traj[k].t);
    }
    const auto imu = sample_imu(traj, zero_noise(), 1);
    for (const auto& s : imu) {
        CHECK(s.omega.z() == doctest::Approx(0.1).epsilon(1e-9));
    }
}

TEST_CASE("noiseless imu double-integrates back to the trajectory") {
    const auto traj = generate_trajectory(GenericProfile{.seed = 3}, 10.0, 0.005);
    const auto imu = sample_imu(traj, zero_noise(), 1);

    // Rotate specific force back to the world frame, drop gravity, and
    // double-integrate with the trapezoid oracle.
    std::vector<Eigen::Vector2d> world_accel;
    for (std::size_t k = 0; k < imu.size(); ++k) {
        const double h = traj[k].heading;
        const Eigen::Vector3d& f = imu[k].accel;
        world_accel.emplace_back(std::cos(h) * f.x() - std::sin(h) * f.y(),
                                 std::sin(h) * f.x() + std::cos(h) * f.y());
    }
    const auto positions = oracles::double_integrate(world_accel, traj.front().position,
                                                     traj.front().velocity, 0.005);
    REQUIRE(positions.size() == traj.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        worst = std::max(worst, (positions[k] - traj[k].position).norm());
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("identical seeds give identical streams") {
    NoiseConfig noise;  // defaults carry nonzero noise
    const auto traj = generate_trajectory(GenericProfile{.seed = 9}, 5.0, 0.005);
    const auto a = sample_imu(traj, noise, 42);
    const auto b = sample_imu(traj, noise, 42);
    const auto c = sample_imu(traj, noise, 43);
    REQUIRE(a.size() == b.size());
    bool all_equal = true;
    bool any_differ_c = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        all_equal = all_equal && a[k].accel == b[k].accel && a[k].omega == b[k].omega;
        any_differ_c = any_differ_c || a[k].accel != c[k].accel;
    }
    CHECK(all_equal);
    CHECK(any_differ_c);
}

TEST_CASE("true bearing geometry") {
    using rover::deg2rad;
    CHECK(true_bearing({0, 0}, 0.0, {1, 1}) == doctest::Approx(deg2rad(45)));
    CHECK(true_bearing({0, 0}, deg2rad(30), {1, 1}) == doctest::Approx(deg2rad(15)));
    CHECK(true_bearing({2, 0}, deg2rad(90), {2, 5}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(true_bearing({1, 1}, 0.0, {1, 1}), std::invalid_argument);
}

TEST_CASE("bearing plus heading recovers atan2 for random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    std::uniform_real_distribution<double> uh(0.0, rover::kTwoPi);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Vector2d robot(u(rng), u(rng));
        const Eigen::Vector2d tag(u(rng), u(rng));
        if ((tag - robot).norm() < 1e-6) continue;
        const double heading = uh(rng);
        const double bearing = true_bearing(robot, heading, tag);
        const double expect = std::atan2(tag.y() - robot.y(), tag.x() - robot.x());
        CHECK(std::abs(rover::angle_diff(bearing + heading, expect)) < 1e-12);
        CHECK(bearing >= 0.0);
        CHECK(bearing < rover::kTwoPi);
    }
}

TEST_CASE("scenario json round trip") {
    ScenarioConfig c;
    c.profile = RectangleProfile{12.0, 8.98, 0.25};
    c.duration = 60.0;
    c.tags = {{0, {1.0, 2.0}, false, 25.0}, {1, {-3.0, 4.0}, true, 12.0}};
    c.reflectors = {{5.0, 5.0}};
    c.seed = 77;
    const auto text = scenario_to_json(c);
    const auto back = scenario_from_json(text);
    CHECK(scenario_to_json(back) == text);
    const auto world = back.build();
    CHECK(world.tags.size() == 2);
    CHECK(world.trajectory.size() > 100);
    world.validate();
}

TEST_CASE("magnetometer carries the declination offset") {
    const auto traj = generate_trajectory(StationaryProfile{}, 2.0, 0.01);
    auto noise = zero_noise();
    const auto imu = sample_imu(traj, noise, 1, 20.0, 0.25);
    int mag_count = 0;
    for (const auto& s : imu) {
        if (s.mag_heading) {
            ++mag_count;
            CHECK(*s.mag_heading == doctest::Approx(0.25));
        }
    }
    CHECK(mag_count == doctest::Approx(2.0 * 20.0).epsilon(0.1));
}
