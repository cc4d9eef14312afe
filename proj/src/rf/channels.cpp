#include "rover/rf/channels.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rover/core/errors.hpp"

namespace rover::rf {

const std::vector<int>& channel_table_5ghz() {
    static const std::vector<int> table = {36,  40,  44,  48,  52,  56,  60,  64,  100,
                                           104, 108, 112, 116, 120, 124, 128, 132, 136,
                                           140, 144, 149, 153, 157, 161, 165};
    return table;
}

double channel_center_hz(int channel) {
    if (!is_valid_channel(channel)) {
        throw std::invalid_argument("unknown 5 GHz channel: " + std::to_string(channel));
    }
    return 5.000e9 + 5.0e6 * static_cast<double>(channel);
}

bool is_valid_channel(int channel) {
    const auto& t = channel_table_5ghz();
    return std::find(t.begin(), t.end(), channel) != t.end();
}

std::map<int, int> allocate_channels(int n_tags, int excitation_channel) {
    if (n_tags < 0) throw std::invalid_argument("n_tags must be nonnegative");
    const double f_exc = channel_center_hz(excitation_channel);

    // Candidates ordered by shift frequency, smallest first (cheapest tag
    // oscillator settings).
    std::vector<int> candidates;
    for (int ch : channel_table_5ghz()) {
        if (ch != excitation_channel) candidates.push_back(ch);
    }
    std::sort(candidates.begin(), candidates.end(), [&](int a, int b) {
        return std::abs(channel_center_hz(a) - f_exc) < std::abs(channel_center_hz(b) - f_exc);
    });

    std::map<int, int> assignment;
    std::set<double> used_centers;
    int tag = 0;
    for (int ch : candidates) {
        if (tag >= n_tags) break;
        const double f = channel_center_hz(ch);
        const double mirror = 2.0 * f_exc - f;  // other first-order sideband
        if (used_centers.count(mirror) > 0) continue;
        assignment[tag++] = ch;
        used_centers.insert(f);
    }
    if (tag < n_tags) {
        throw ChannelCapacityError("cannot allocate " + std::to_string(n_tags) +
                                   " tags in the 5 GHz band");
    }
    return assignment;
}

}  // namespace rover::rf
