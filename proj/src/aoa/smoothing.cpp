#include "rover/aoa/smoothing.hpp"

#include <stdexcept>

namespace rover::aoa {

Eigen::MatrixXcd smooth_csi(const Eigen::MatrixXcd& H, int sub_block_len,
                            std::pair<int, int> antenna_pair) {
    const int n_sub = static_cast<int>(H.cols());
    const int L = sub_block_len > 0 ? sub_block_len : n_sub / 2;
    if (L < 1 || n_sub < 2 * L) {
        throw std::invalid_argument("smoothing needs N >= 2 * sub_block_len subcarriers");
    }
    const auto [a0, a1] = antenna_pair;
    if (a0 < 0 || a1 < 0 || a0 >= H.rows() || a1 >= H.rows()) {
        throw std::invalid_argument("antenna pair out of range");
    }

    const int n_windows = n_sub - L + 1;
    Eigen::MatrixXcd X(2 * L, 2 * n_windows);
    for (int w = 0; w < n_windows; ++w) {
        // Forward sub-block.
        for (int s = 0; s < L; ++s) {
            X(s, w) = H(a0, w + s);
            X(L + s, w) = H(a1, w + s);
        }
        // Backward: conjugate with both antenna and subcarrier order
        // reversed, which maps onto the same steering vector with a
        // path-dependent gain and so decorrelates coherent paths.
        for (int s = 0; s < L; ++s) {
            X(s, n_windows + w) = std::conj(H(a1, w + L - 1 - s));
            X(L + s, n_windows + w) = std::conj(H(a0, w + L - 1 - s));
        }
    }
    return X;
}

}  // namespace rover::aoa
