#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

namespace rover::slam {

/// Variable identifier: a robot state (by monotone sequence id) or a tag.
struct VarKey {
    enum class Kind { State, Tag };
    Kind kind = Kind::State;
    int id = 0;

    friend bool operator==(const VarKey&, const VarKey&) = default;
    friend auto operator<=>(const VarKey&, const VarKey&) = default;
};

std::string to_string(const VarKey& key);

inline VarKey state_key(int id) { return {VarKey::Kind::State, id}; }
inline VarKey tag_key(int id) { return {VarKey::Kind::Tag, id}; }

/// Gaussian information over a set of planar (x, y) variables:
///   cost(S) = S^T Gamma S - 2 eta^T S  (up to a constant),
/// equivalently the square-root residual ||b_p - Gamma^(1/2) S||^2 around the
/// mean Gamma^+ eta. Used both as the sliding-window prior and as the
/// scratch joint system during marginalization.
class InfoForm {
  public:
    InfoForm() = default;

    bool empty() const { return keys_.empty(); }
    const std::vector<VarKey>& keys() const { return keys_; }
    const Eigen::MatrixXd& gamma() const { return gamma_; }
    const Eigen::VectorXd& eta() const { return eta_; }

    int index_of(const VarKey& key) const;  // -1 when absent
    bool contains(const VarKey& key) const { return index_of(key) >= 0; }

    /// Appends the variable with zero information if not yet present;
    /// returns its block index.
    int ensure(const VarKey& key);

    void add_information(const VarKey& a, const VarKey& b, const Eigen::Matrix2d& block);
    void add_eta(const VarKey& key, const Eigen::Vector2d& v);

    /// Adds a weighted measurement row set: rows J_k stacked over `touched`
    /// variables with right-hand side z and information weight W (rows x
    /// rows). Contributes J^T W J and J^T W z.
    void add_rows(const std::vector<VarKey>& touched,
                  const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>>& jacobians,
                  const Eigen::VectorXd& z, const Eigen::MatrixXd& weight);

    /// Absorbs another information form.
    void add(const InfoForm& other);

    /// Schur-complements the listed variables out. Returns true when the
    /// removed block was singular and a ridge was applied.
    bool marginalize_out(const std::vector<VarKey>& remove, double ridge = 1e-9);

    /// Drops a variable without transporting its information (used for
    /// never-published tags whose rows are discarded with them).
    void drop(const VarKey& key);

    /// Quadratic cost contribution at the stacked estimate of `order`.
    double cost(const std::vector<VarKey>& order, const Eigen::VectorXd& stacked) const;

  private:
    std::vector<VarKey> keys_;
    Eigen::MatrixXd gamma_;
    Eigen::VectorXd eta_;
};

}  // namespace rover::slam
