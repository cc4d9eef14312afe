#include "rover/rf/packet.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "rover/sim/imu.hpp"

namespace rover::rf {

namespace {

std::complex<double> path_gain(double total_length, double wavelength, double reference_range,
                               double extra_loss) {
    // Inverse-distance amplitude referenced to reference_range, carrier
    // phase folded into the complex gain.
    const double mag = std::min(1.0, extra_loss * reference_range / std::max(total_length, 0.1));
    const double carrier_phase =
        -2.0 * std::numbers::pi * std::fmod(total_length / wavelength, 1.0);
    return std::polar(mag, carrier_phase);
}

}  // namespace

std::optional<CsiFrame> simulate_packet(const Eigen::Vector2d& robot_pos, double heading,
                                        const sim::TagSpec& tag, int channel,
                                        const Eigen::Vector2d& ap_position,
                                        const std::vector<Eigen::Vector2d>& reflectors,
                                        const sim::NoiseConfig& noise, const LinkConfig& link,
                                        double t, std::mt19937_64& rng) {
    const double range = (tag.position - robot_pos).norm();
    if (range > tag.max_range) return std::nullopt;

    const double tx_leg = (tag.position - ap_position).norm();
    const double nlos_factor = tag.nlos ? link.nlos_extra_loss : 1.0;

    std::vector<VirtualPath> paths;
    VirtualPath direct;
    direct.aoa = sim::true_bearing(robot_pos, heading, tag.position);
    direct.tof = (tx_leg + range) / kSpeedOfLight;
    direct.attenuation =
        path_gain(tx_leg + range, link.geometry.wavelength, link.reference_range, nlos_factor);
    direct.validate();
    paths.push_back(direct);

    for (const auto& r : reflectors) {
        const double leg_a = (r - tag.position).norm();
        const double leg_b = (robot_pos - r).norm();
        if (leg_a == 0.0 || leg_b == 0.0) continue;
        VirtualPath p;
        p.aoa = sim::true_bearing(robot_pos, heading, r);
        p.tof = (tx_leg + leg_a + leg_b) / kSpeedOfLight;
        p.attenuation =
            link.reflection_loss * path_gain(tx_leg + leg_a + leg_b, link.geometry.wavelength,
                                             link.reference_range, nlos_factor);
        p.validate();
        paths.push_back(p);
    }

    CsiFrame frame = synthesize_csi(paths, link.geometry);
    frame.tag_id = tag.id;
    frame.channel_index = channel;
    frame.t = t;

    if (std::isfinite(noise.csi_snr)) {
        const double signal_power = frame.H.squaredNorm() / static_cast<double>(frame.H.size());
        const double noise_power = signal_power * std::pow(10.0, -noise.csi_snr / 10.0);
        const double sigma = std::sqrt(noise_power / 2.0);
        std::normal_distribution<double> gauss(0.0, sigma);
        for (int m = 0; m < frame.H.rows(); ++m) {
            for (int n = 0; n < frame.H.cols(); ++n) {
                frame.H(m, n) += std::complex<double>(gauss(rng), gauss(rng));
            }
        }
    } else if (noise.csi_snr < 0.0) {
        // -inf dB: nothing but noise.
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int m = 0; m < frame.H.rows(); ++m) {
            for (int n = 0; n < frame.H.cols(); ++n) {
                frame.H(m, n) = std::complex<double>(gauss(rng), gauss(rng));
            }
        }
    }
    return frame;
}

std::string csi_frame_to_jsonl(const CsiFrame& frame) {
    nlohmann::json j;
    j["t"] = frame.t;
    j["tag"] = frame.tag_id;
    j["channel"] = frame.channel_index;
    j["f_delta"] = frame.f_delta;
    j["wavelength"] = frame.wavelength;
    j["array_spacing"] = frame.array_spacing;
    auto rows = nlohmann::json::array();
    for (int m = 0; m < frame.H.rows(); ++m) {
        auto row = nlohmann::json::array();
        for (int n = 0; n < frame.H.cols(); ++n) {
            row.push_back({frame.H(m, n).real(), frame.H(m, n).imag()});
        }
        rows.push_back(row);
    }
    j["H"] = rows;
    return j.dump();
}

CsiFrame csi_frame_from_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    CsiFrame frame;
    frame.t = j.at("t").get<double>();
    frame.tag_id = j.at("tag").get<int>();
    frame.channel_index = j.at("channel").get<int>();
    frame.f_delta = j.value("f_delta", frame.f_delta);
    frame.wavelength = j.value("wavelength", frame.wavelength);
    frame.array_spacing = j.value("array_spacing", frame.array_spacing);
    const auto& rows = j.at("H");
    frame.H.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(rows.at(0).size()));
    for (Eigen::Index m = 0; m < frame.H.rows(); ++m) {
        for (Eigen::Index n = 0; n < frame.H.cols(); ++n) {
            const auto& cell = rows.at(m).at(n);
            frame.H(m, n) = {cell.at(0).get<double>(), cell.at(1).get<double>()};
        }
    }
    return frame;
}

}  // namespace rover::rf
