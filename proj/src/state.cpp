#include "erconsensus/state.hpp"

#include <stdexcept>

namespace erc {

StateBlock::StateBlock(std::size_t agents, std::size_t dims)
    : values_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(agents),
                                    static_cast<Eigen::Index>(dims))) {}

StateBlock::StateBlock(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw std::invalid_argument("state has non-finite entries");
}

StateBlock StateBlock::column(std::span<const double> values) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(values.size()), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
  return StateBlock(std::move(m));
}

std::vector<double> StateBlock::mean() const {
  std::vector<double> out(dims(), 0.0);
  if (agents() == 0) return out;
  for (std::size_t d = 0; d < dims(); ++d) out[d] = values_.col(static_cast<Eigen::Index>(d)).mean();
  return out;
}

}  // namespace erc
