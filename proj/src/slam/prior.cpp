#include "rover/slam/prior.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

namespace rover::slam {

std::string to_string(const VarKey& key) {
    return (key.kind == VarKey::Kind::State ? "state " : "tag ") + std::to_string(key.id);
}

int InfoForm::index_of(const VarKey& key) const {
    const auto it = std::find(keys_.begin(), keys_.end(), key);
    return it == keys_.end() ? -1 : static_cast<int>(it - keys_.begin());
}

int InfoForm::ensure(const VarKey& key) {
    int idx = index_of(key);
    if (idx >= 0) return idx;
    idx = static_cast<int>(keys_.size());
    keys_.push_back(key);
    const int n = 2 * static_cast<int>(keys_.size());
    gamma_.conservativeResizeLike(Eigen::MatrixXd::Zero(n, n));
    eta_.conservativeResizeLike(Eigen::VectorXd::Zero(n));
    return idx;
}

void InfoForm::add_information(const VarKey& a, const VarKey& b, const Eigen::Matrix2d& block) {
    const int ia = ensure(a), ib = ensure(b);
    gamma_.block<2, 2>(2 * ia, 2 * ib) += block;
    if (ia != ib) gamma_.block<2, 2>(2 * ib, 2 * ia) += block.transpose();
}

void InfoForm::add_eta(const VarKey& key, const Eigen::Vector2d& v) {
    eta_.segment<2>(2 * ensure(key)) += v;
}

void InfoForm::add_rows(const std::vector<VarKey>& touched,
                        const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>>& jacobians,
                        const Eigen::VectorXd& z, const Eigen::MatrixXd& weight) {
    if (touched.size() != jacobians.size()) {
        throw std::invalid_argument("add_rows: one jacobian per touched variable");
    }
    std::vector<int> idx(touched.size());
    for (std::size_t k = 0; k < touched.size(); ++k) idx[k] = ensure(touched[k]);

    for (std::size_t a = 0; a < touched.size(); ++a) {
        eta_.segment<2>(2 * idx[a]) += jacobians[a].transpose() * (weight * z);
        for (std::size_t b = 0; b < touched.size(); ++b) {
            gamma_.block<2, 2>(2 * idx[a], 2 * idx[b]) +=
                jacobians[a].transpose() * (weight * jacobians[b]);
        }
    }
}

void InfoForm::add(const InfoForm& other) {
    for (std::size_t a = 0; a < other.keys_.size(); ++a) {
        eta_.segment<2>(2 * ensure(other.keys_[a])) += other.eta_.segment<2>(2 * a);
    }
    for (std::size_t a = 0; a < other.keys_.size(); ++a) {
        const int ia = index_of(other.keys_[a]);
        for (std::size_t b = 0; b < other.keys_.size(); ++b) {
            const int ib = index_of(other.keys_[b]);
            gamma_.block<2, 2>(2 * ia, 2 * ib) +=
                other.gamma_.block<2, 2>(2 * a, 2 * b);
        }
    }
}

bool InfoForm::marginalize_out(const std::vector<VarKey>& remove, double ridge) {
    std::vector<int> m_idx;
    for (const auto& key : remove) {
        const int idx = index_of(key);
        if (idx >= 0) m_idx.push_back(idx);
    }
    if (m_idx.empty()) return false;

    std::vector<int> k_idx;
    for (int i = 0; i < static_cast<int>(keys_.size()); ++i) {
        if (std::find(m_idx.begin(), m_idx.end(), i) == m_idx.end()) k_idx.push_back(i);
    }

    const auto take = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
        Eigen::MatrixXd out(2 * rows.size(), 2 * cols.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                out.block<2, 2>(2 * r, 2 * c) = gamma_.block<2, 2>(2 * rows[r], 2 * cols[c]);
            }
        }
        return out;
    };

    Eigen::MatrixXd h_kk = take(k_idx, k_idx);
    const Eigen::MatrixXd h_km = take(k_idx, m_idx);
    Eigen::MatrixXd h_mm = take(m_idx, m_idx);
    Eigen::VectorXd eta_k(2 * k_idx.size()), eta_m(2 * m_idx.size());
    for (std::size_t r = 0; r < k_idx.size(); ++r) {
        eta_k.segment<2>(2 * r) = eta_.segment<2>(2 * k_idx[r]);
    }
    for (std::size_t r = 0; r < m_idx.size(); ++r) {
        eta_m.segment<2>(2 * r) = eta_.segment<2>(2 * m_idx[r]);
    }

    Eigen::LDLT<Eigen::MatrixXd> ldlt(h_mm);
    bool regularized = false;
    const double pivot_floor = 1e-12 * std::max(1.0, h_mm.diagonal().maxCoeff());
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() < pivot_floor) {
        h_mm.diagonal().array() += ridge;
        ldlt.compute(h_mm);
        regularized = true;
    }

    h_kk -= h_km * ldlt.solve(h_km.transpose());
    eta_k -= h_km * ldlt.solve(eta_m);

    std::vector<VarKey> kept;
    kept.reserve(k_idx.size());
    for (int i : k_idx) kept.push_back(keys_[i]);
    keys_ = std::move(kept);
    gamma_ = 0.5 * (h_kk + h_kk.transpose());
    eta_ = eta_k;
    return regularized;
}

void InfoForm::drop(const VarKey& key) {
    const int idx = index_of(key);
    if (idx < 0) return;
    std::vector<int> keep;
    for (int i = 0; i < static_cast<int>(keys_.size()); ++i) {
        if (i != idx) keep.push_back(i);
    }
    Eigen::MatrixXd g(2 * keep.size(), 2 * keep.size());
    Eigen::VectorXd e(2 * keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        e.segment<2>(2 * r) = eta_.segment<2>(2 * keep[r]);
        for (std::size_t c = 0; c < keep.size(); ++c) {
            g.block<2, 2>(2 * r, 2 * c) = gamma_.block<2, 2>(2 * keep[r], 2 * keep[c]);
        }
    }
    std::vector<VarKey> kept;
    for (int i : keep) kept.push_back(keys_[i]);
    keys_ = std::move(kept);
    gamma_ = std::move(g);
    eta_ = std::move(e);
}

double InfoForm::cost(const std::vector<VarKey>& order, const Eigen::VectorXd& stacked) const {
    if (empty()) return 0.0;
    Eigen::VectorXd s(2 * keys_.size());
    for (std::size_t k = 0; k < keys_.size(); ++k) {
        const auto it = std::find(order.begin(), order.end(), keys_[k]);
        if (it == order.end()) {
            throw std::invalid_argument("prior variable missing from the state ordering: " +
                                        to_string(keys_[k]));
        }
        s.segment<2>(2 * k) = stacked.segment<2>(2 * (it - order.begin()));
    }
    return s.dot(gamma_ * s) - 2.0 * eta_.dot(s);
}

}  // namespace rover::slam
