#include "rover/aoa/music.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "rover/aoa/smoothing.hpp"
#include "rover/core/angles.hpp"

namespace rover::aoa {

namespace {

// Noise-space evaluator for one smoothed antenna pair. Works on the signal
// subspace E_s of the smoothed covariance: a^H (I - Es Es^H) a evaluated for
// the separable steering a[(i,s)] = exp(-j2pi(i*dphi + tau*s*f_delta)).
class PairSpectrum {
  public:
    PairSpectrum(const Eigen::MatrixXcd& H, std::pair<int, int> antennas, int signal_dim_cap)
        : L_(static_cast<int>(H.cols()) / 2) {
        const Eigen::MatrixXcd X = smooth_csi(H, L_, antennas);
        const Eigen::MatrixXcd C = X * X.adjoint() / static_cast<double>(X.cols());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(C);
        const Eigen::VectorXd evals = eig.eigenvalues();  // ascending
        const int dim = static_cast<int>(evals.size());

        // Model order: largest eigenvalue-ratio drop, capped.
        const double lead = std::max(evals(dim - 1), 1e-300);
        int order = 1;
        double best_ratio = 0.0;
        for (int k = 1; k <= signal_dim_cap && k < dim; ++k) {
            const double hi = evals(dim - k);
            const double lo = std::max(evals(dim - k - 1), lead * 1e-15);
            const double ratio = hi / lo;
            if (ratio > best_ratio) {
                best_ratio = ratio;
                order = k;
            }
        }
        signal_ = eig.eigenvectors().rightCols(order);
        rows_ = 2 * L_;
    }

    /// Projections of the subcarrier steering vector (fixed tau) onto the
    /// antenna-blocks of every signal eigenvector.
    void prepare_tau(double tau, double f_delta) {
        const int p = static_cast<int>(signal_.cols());
        w0_.resize(p);
        w1_.resize(p);
        Eigen::VectorXcd v(L_);
        for (int s = 0; s < L_; ++s) {
            v(s) = std::polar(1.0, -2.0 * std::numbers::pi * tau * s * f_delta);
        }
        for (int k = 0; k < p; ++k) {
            w0_(k) = signal_.col(k).head(L_).dot(v);  // conj(e) . v
            w1_(k) = signal_.col(k).tail(L_).dot(v);
        }
    }

    /// Noise-space power a^H (I - EsEs^H) a for the prepared tau and the
    /// given antenna phase increment (cycles).
    double noise_power(double dphi_cycles) const {
        const std::complex<double> u1 =
            std::polar(1.0, -2.0 * std::numbers::pi * dphi_cycles);
        double proj = 0.0;
        for (int k = 0; k < w0_.size(); ++k) {
            proj += std::norm(w0_(k) + u1 * w1_(k));
        }
        return std::max(static_cast<double>(rows_) - proj, 1e-12);
    }

  private:
    int L_;
    int rows_ = 0;
    Eigen::MatrixXcd signal_;
    Eigen::VectorXcd w0_, w1_;
};

struct GridPeak {
    int it = 0;
    int itau = 0;
    double power = 0.0;
};

}  // namespace

std::vector<PathEstimate> estimate_aoa_tof(const rf::CsiFrame& frame, const MusicGrid& grid,
                                           const std::string& spectrum_dump_csv) {
    if (frame.H.rows() != rf::kNumAntennas || frame.H.cols() < 2) {
        throw std::invalid_argument("CSI frame must be 3 x N with N >= 2");
    }
    constexpr int kSignalCap = 3;
    PairSpectrum primary(frame.H, {0, 1}, kSignalCap);
    PairSpectrum resolver(frame.H, {0, 2}, kSignalCap);

    const int n_theta = static_cast<int>(std::round(180.0 / grid.theta_step_deg)) + 1;
    const int n_tau = static_cast<int>(std::round(grid.tau_max / grid.tau_step)) + 1;
    const double d_over_lambda = frame.array_spacing / frame.wavelength;

    Eigen::MatrixXd power(n_theta, n_tau);
    for (int j = 0; j < n_tau; ++j) {
        const double tau = j * grid.tau_step;
        primary.prepare_tau(tau, frame.f_delta);
        for (int i = 0; i < n_theta; ++i) {
            const double theta = deg2rad(i * grid.theta_step_deg);
            power(i, j) = 1.0 / primary.noise_power(d_over_lambda * std::cos(theta));
        }
    }

    if (!spectrum_dump_csv.empty()) {
        std::ofstream out(spectrum_dump_csv);
        out << "theta_deg,tau_ns,power\n";
        for (int i = 0; i < n_theta; ++i) {
            for (int j = 0; j < n_tau; ++j) {
                out << i * grid.theta_step_deg << ',' << j * grid.tau_step * 1e9 << ','
                    << power(i, j) << '\n';
            }
        }
    }

    // Median as the prominence baseline.
    std::vector<double> flat(power.data(), power.data() + power.size());
    std::nth_element(flat.begin(), flat.begin() + flat.size() / 2, flat.end());
    const double median = flat[flat.size() / 2];
    const double floor_level = grid.peak_threshold * median;

    std::vector<GridPeak> peaks;
    for (int i = 0; i < n_theta; ++i) {
        for (int j = 0; j < n_tau; ++j) {
            const double p = power(i, j);
            if (p < floor_level) continue;
            bool is_max = true;
            for (int di = -1; di <= 1 && is_max; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= n_theta || jj >= n_tau) continue;
                    if (power(ii, jj) > p) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) peaks.push_back({i, j, p});
        }
    }

    std::sort(peaks.begin(), peaks.end(),
              [](const GridPeak& a, const GridPeak& b) { return a.power > b.power; });

    // Suppress shoulders of stronger peaks, keep at most max_paths.
    std::vector<GridPeak> kept;
    for (const auto& p : peaks) {
        bool close = false;
        for (const auto& k : kept) {
            if (std::abs(k.it - p.it) <= 3 && std::abs(k.itau - p.itau) <= 2) {
                close = true;
                break;
            }
        }
        if (!close) kept.push_back(p);
        if (static_cast<int>(kept.size()) >= grid.max_paths) break;
    }

    std::vector<PathEstimate> result;
    for (const auto& p : kept) {
        const double theta = deg2rad(p.it * grid.theta_step_deg);
        const double tau = p.itau * grid.tau_step;
        // Resolve the front-back ambiguity with the third antenna: the true
        // side also nulls the resolver pair's noise space.
        resolver.prepare_tau(tau, frame.f_delta);
        const double front = resolver.noise_power(
            d_over_lambda * std::cos(theta + std::numbers::pi / 3.0));
        const double back = resolver.noise_power(
            d_over_lambda * std::cos(-theta + std::numbers::pi / 3.0));
        const double aoa = front <= back ? theta : kTwoPi - theta;
        result.push_back({wrap_2pi(aoa), tau, p.power});
    }
    std::sort(result.begin(), result.end(),
              [](const PathEstimate& a, const PathEstimate& b) { return a.tof < b.tof; });
    return result;
}

}  // namespace rover::aoa
