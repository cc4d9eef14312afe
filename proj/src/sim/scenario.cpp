#include "rover/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rover::sim {

using nlohmann::json;

void NoiseConfig::validate() const {
    const double fields[] = {gyro_noise_density, gyro_bias,       accel_noise_density,
                             mag_heading_noise,  aoa_direct_noise};
    for (double f : fields) {
        if (f < 0.0 || !std::isfinite(f)) {
            throw std::invalid_argument("noise parameters must be finite and nonnegative");
        }
    }
}

void WorldScenario::validate() const {
    noise.validate();
    if (imu_rate < packet_rate) {
        throw std::invalid_argument("imu_rate must be >= packet_rate");
    }
    for (std::size_t k = 0; k + 1 < trajectory.size(); ++k) {
        if (!(trajectory[k + 1].t > trajectory[k].t)) {
            throw std::invalid_argument("trajectory timestamps must be strictly increasing");
        }
    }
}

WorldScenario ScenarioConfig::build() const { return build(seed); }

WorldScenario ScenarioConfig::build(std::uint64_t seed_override) const {
    WorldScenario w;
    w.tags = tags;
    w.trajectory = generate_trajectory(profile, duration, 1.0 / imu_rate, start, start_heading);
    w.imu_rate = imu_rate;
    w.packet_rate = packet_rate;
    w.mag_rate = mag_rate;
    w.noise = noise;
    w.seed = seed_override;
    w.ap_position = ap_position;
    w.reflectors = reflectors;
    w.mag_declination = mag_declination;
    w.validate();
    return w;
}

namespace {

json profile_to_json(const MotionProfile& p) {
    json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GenericProfile>) {
                j = {{"type", "generic"},
                     {"seed", v.seed},
                     {"max_speed", v.max_speed},
                     {"linear_accel", v.linear_accel},
                     {"turn_rate", v.turn_rate}};
            } else if constexpr (std::is_same_v<T, StationaryProfile>) {
                j = {{"type", "stationary"}};
            } else if constexpr (std::is_same_v<T, ConstantVelocityProfile>) {
                j = {{"type", "constant_velocity"}, {"speed", v.speed}, {"heading", v.heading}};
            } else if constexpr (std::is_same_v<T, RectangleProfile>) {
                j = {{"type", "rectangle"}, {"width", v.width},
                     {"height", v.height},  {"speed", v.speed},
                     {"linear_accel", v.linear_accel}, {"turn_rate", v.turn_rate}};
            } else if constexpr (std::is_same_v<T, CompositeProfile>) {
                j["type"] = "composite";
                j["segments"] = json::array();
                for (const auto& [sub, dur] : v.segments) {
                    j["segments"].push_back({{"duration", dur}, {"profile", profile_to_json(sub)}});
                }
            }
        },
        p);
    return j;
}

MotionProfile profile_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "generic") {
        GenericProfile p;
        p.seed = j.value("seed", p.seed);
        p.max_speed = j.value("max_speed", p.max_speed);
        p.linear_accel = j.value("linear_accel", p.linear_accel);
        p.turn_rate = j.value("turn_rate", p.turn_rate);
        return p;
    }
    if (type == "stationary") return StationaryProfile{};
    if (type == "constant_velocity") {
        ConstantVelocityProfile p;
        p.speed = j.value("speed", p.speed);
        p.heading = j.value("heading", p.heading);
        return p;
    }
    if (type == "rectangle") {
        RectangleProfile p;
        p.width = j.at("width").get<double>();
        p.height = j.at("height").get<double>();
        p.speed = j.value("speed", p.speed);
        p.linear_accel = j.value("linear_accel", p.linear_accel);
        p.turn_rate = j.value("turn_rate", p.turn_rate);
        return p;
    }
    if (type == "composite") {
        CompositeProfile p;
        for (const auto& seg : j.at("segments")) {
            p.segments.emplace_back(profile_from_json(seg.at("profile")),
                                    seg.at("duration").get<double>());
        }
        return p;
    }
    throw std::invalid_argument("unknown motion profile type: " + type);
}

json vec2_to_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Eigen::Vector2d vec2_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    ScenarioConfig c;
    c.profile = profile_from_json(j.at("profile"));
    c.duration = j.at("duration").get<double>();
    c.imu_rate = j.value("imu_rate", c.imu_rate);
    c.packet_rate = j.value("packet_rate", c.packet_rate);
    c.mag_rate = j.value("mag_rate", c.mag_rate);
    c.seed = j.value("seed", c.seed);
    c.mag_declination = j.value("mag_declination", c.mag_declination);
    if (j.contains("ap_position")) c.ap_position = vec2_from_json(j["ap_position"]);
    if (j.contains("start")) c.start = vec2_from_json(j["start"]);
    c.start_heading = j.value("start_heading", 0.0);
    for (const auto& t : j.value("tags", json::array())) {
        TagSpec tag;
        tag.id = t.at("id").get<int>();
        tag.position = vec2_from_json(t.at("position"));
        tag.nlos = t.value("nlos", false);
        tag.max_range = t.value("max_range", tag.max_range);
        c.tags.push_back(tag);
    }
    for (const auto& r : j.value("reflectors", json::array())) {
        c.reflectors.push_back(vec2_from_json(r));
    }
    if (j.contains("noise")) {
        const auto& n = j["noise"];
        c.noise.gyro_noise_density = n.value("gyro_noise_density", c.noise.gyro_noise_density);
        c.noise.gyro_bias = n.value("gyro_bias", c.noise.gyro_bias);
        c.noise.accel_noise_density = n.value("accel_noise_density", c.noise.accel_noise_density);
        c.noise.mag_heading_noise = n.value("mag_heading_noise", c.noise.mag_heading_noise);
        c.noise.csi_snr = n.value("csi_snr", c.noise.csi_snr);
        c.noise.aoa_direct_noise = n.value("aoa_direct_noise", c.noise.aoa_direct_noise);
    }
    c.noise.validate();
    return c;
}

std::string scenario_to_json(const ScenarioConfig& c) {
    json j;
    j["profile"] = profile_to_json(c.profile);
    j["duration"] = c.duration;
    j["imu_rate"] = c.imu_rate;
    j["packet_rate"] = c.packet_rate;
    j["mag_rate"] = c.mag_rate;
    j["seed"] = c.seed;
    j["mag_declination"] = c.mag_declination;
    j["ap_position"] = vec2_to_json(c.ap_position);
    j["start"] = vec2_to_json(c.start);
    j["start_heading"] = c.start_heading;
    j["tags"] = json::array();
    for (const auto& t : c.tags) {
        j["tags"].push_back({{"id", t.id},
                             {"position", vec2_to_json(t.position)},
                             {"nlos", t.nlos},
                             {"max_range", t.max_range}});
    }
    j["reflectors"] = json::array();
    for (const auto& r : c.reflectors) j["reflectors"].push_back(vec2_to_json(r));
    j["noise"] = {{"gyro_noise_density", c.noise.gyro_noise_density},
                  {"gyro_bias", c.noise.gyro_bias},
                  {"accel_noise_density", c.noise.accel_noise_density},
                  {"mag_heading_noise", c.noise.mag_heading_noise},
                  {"csi_snr", c.noise.csi_snr},
                  {"aoa_direct_noise", c.noise.aoa_direct_noise}};
    return j.dump(2);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t,x,y,heading,vx,vy,ax,ay\n";
    out.precision(12);
    for (const auto& s : traj) {
        out << s.t << ',' << s.position.x() << ',' << s.position.y() << ',' << s.heading << ','
            << s.velocity.x() << ',' << s.velocity.y() << ',' << s.acceleration.x() << ','
            << s.acceleration.y() << '\n';
    }
}

}  // namespace rover::sim
