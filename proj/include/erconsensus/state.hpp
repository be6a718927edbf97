#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace erc {

/// Ensemble state: n agents by d dimensions; column j holds dimension j.
class StateBlock {
 public:
  StateBlock() = default;
  StateBlock(std::size_t agents, std::size_t dims);
  /// Throws std::invalid_argument on non-finite entries.
  explicit StateBlock(Eigen::MatrixXd values);
  /// Single-dimension state.
  static StateBlock column(std::span<const double> values);

  std::size_t agents() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::MatrixXd& mutable_values() noexcept { return values_; }
  double operator()(std::size_t i, std::size_t d) const {
    return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d));
  }

  /// Per-dimension mean over agents.
  std::vector<double> mean() const;
  /// Sum of squares of all entries.
  double squared_norm() const { return values_.squaredNorm(); }

 private:
  Eigen::MatrixXd values_;
};

}  // namespace erc
