#include "erconsensus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "erconsensus/state.hpp"

namespace erc {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

}  // namespace

SymmetricMatrix::SymmetricMatrix(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asymmetry = m.size() == 0 ? 0.0 : (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asymmetry > kSymmetryTolerance * scale)
    throw std::invalid_argument("matrix is not symmetric (asymmetry " + std::to_string(asymmetry) + ")");
  m_ = 0.5 * (m + m.transpose());
}

SymmetricMatrix SymmetricMatrix::zero(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return SymmetricMatrix(Eigen::MatrixXd::Zero(k, k), Trusted{});
}

SymmetricMatrix SymmetricMatrix::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return SymmetricMatrix(Eigen::MatrixXd::Identity(k, k), Trusted{});
}

SymmetricMatrix SymmetricMatrix::ones(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return SymmetricMatrix(Eigen::MatrixXd::Ones(k, k), Trusted{});
}

SymmetricMatrix SymmetricMatrix::complete_laplacian(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = static_cast<double>(n) * Eigen::MatrixXd::Identity(k, k) - Eigen::MatrixXd::Ones(k, k);
  return SymmetricMatrix(std::move(m), Trusted{});
}

double SpectrumResult::second_largest() const {
  if (eigenvalues.size() < 2) throw std::invalid_argument("second_largest needs n >= 2");
  return eigenvalues(eigenvalues.size() - 2);
}

SpectrumResult sym_eigen(const SymmetricMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw EigenSolverError("symmetric eigensolver did not converge for n=" + std::to_string(m.size()));
  // Eigen already returns eigenvalues in increasing order.
  return SpectrumResult{solver.eigenvalues(), solver.eigenvectors()};
}

SymmetricMatrix expm_scaled(const SymmetricMatrix& m, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("expm_scaled: t must be non-negative");
  if (t == 0.0) return SymmetricMatrix::identity(m.size());
  return sym_eigen(m).apply([t](double lambda) { return std::exp(-t * lambda); });
}

StructuredEigs structured_eigs(double a, double b, std::size_t n) {
  if (n < 2) throw std::invalid_argument("structured_eigs: n must be at least 2");
  return {a + static_cast<double>(n - 1) * b, a - b};
}

SymmetricMatrix structured_matrix(double a, double b, std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, b);
  m.diagonal().setConstant(a);
  return SymmetricMatrix(m);
}

StateBlock project_disagreement(const StateBlock& z) {
  Eigen::MatrixXd centered = z.values();
  if (centered.rows() > 0) centered.rowwise() -= centered.colwise().mean();
  return StateBlock(std::move(centered));
}

double dist_to_agreement(const StateBlock& z) {
  return std::sqrt(project_disagreement(z).squared_norm());
}

}  // namespace erc
