#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "rover/rf/csi.hpp"
#include "rover/sim/scenario.hpp"

namespace rover::rf {

/// Synthetic multipath setup for one link simulation.
struct LinkConfig {
    ArrayGeometry geometry;
    double reflection_loss = 0.5;   // amplitude factor per bounce
    double reference_range = 1.0;   // m at which the direct path has unit gain
    double nlos_extra_loss = 0.35;  // extra amplitude factor for NLOS tags
};

/// Simulates one backscatter packet from `tag` as seen by the robot at
/// (robot_pos, heading). Builds the direct virtual path plus one reflected
/// path per scenario reflector, composes the two-leg ToFs additively, and
/// adds complex white noise at the configured CSI SNR. Returns nullopt when
/// the tag is beyond its max range (link budget cut).
std::optional<CsiFrame> simulate_packet(const Eigen::Vector2d& robot_pos, double heading,
                                        const sim::TagSpec& tag, int channel,
                                        const Eigen::Vector2d& ap_position,
                                        const std::vector<Eigen::Vector2d>& reflectors,
                                        const sim::NoiseConfig& noise, const LinkConfig& link,
                                        double t, std::mt19937_64& rng);

/// JSON-lines CSI dump: one object per packet, `{t, tag, channel, H}` with H
/// as 3 rows of [re, im] pairs.
std::string csi_frame_to_jsonl(const CsiFrame& frame);
CsiFrame csi_frame_from_jsonl(const std::string& line);

}  // namespace rover::rf
