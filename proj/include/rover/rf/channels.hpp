#pragma once

#include <map>
#include <vector>

namespace rover::rf {

/// 20 MHz channels in the 5 GHz band (UNII-1/2/2e/3).
const std::vector<int>& channel_table_5ghz();

/// Center frequency in Hz of a 5 GHz channel number.
double channel_center_hz(int channel);

bool is_valid_channel(int channel);

/// Assigns one distinct channel per tag, none equal to the excitation
/// channel, such that no tag's first-order mirror sideband lands on another
/// assignment. Channels are picked closest-shift-first. Throws
/// std::invalid_argument for an unknown excitation channel and
/// ChannelCapacityError when n_tags exceeds the feasible set.
std::map<int, int> allocate_channels(int n_tags, int excitation_channel = 165);

}  // namespace rover::rf
