#pragma once

#include <Eigen/Core>
#include <complex>

namespace rover::aoa {

/// Forward-backward spatial smoothing of a 3 x N CSI matrix over one antenna
/// pair. Each column of the result stacks a 2-antenna x L sub-block of the
/// input (antenna-major ordering, L = sub-block length in subcarriers);
/// forward columns slide the sub-block over subcarrier starts, backward
/// columns are their conjugate reversals. For L = N/2 this yields 2*L rows
/// and 2*(N-L+1) columns, and a single propagation path produces a rank-1
/// column space.
///
/// `antenna_pair` selects the two physical antennas (0-based) forming the
/// sub-block rows. Throws std::invalid_argument when N < 2*L.
Eigen::MatrixXcd smooth_csi(const Eigen::MatrixXcd& H, int sub_block_len = -1,
                            std::pair<int, int> antenna_pair = {0, 1});

}  // namespace rover::aoa
