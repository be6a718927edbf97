#pragma once

#include <cstddef>
#include <stdexcept>

#include <Eigen/Dense>

namespace erc {

class StateBlock;

/// Dense real symmetric matrix.
///
/// Construction symmetrizes the input as (M + M^T)/2 when its largest
/// asymmetry is within 1e-12 relative to max(1, max|M_ij|), and throws
/// std::invalid_argument otherwise.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(const Eigen::MatrixXd& m);

  static SymmetricMatrix zero(std::size_t n);
  static SymmetricMatrix identity(std::size_t n);
  /// J, the all-ones matrix.
  static SymmetricMatrix ones(std::size_t n);
  /// nI - J, the Laplacian of the complete graph.
  static SymmetricMatrix complete_laplacian(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  struct Trusted {};
  SymmetricMatrix(Eigen::MatrixXd m, Trusted) : m_(std::move(m)) {}
  friend SymmetricMatrix expm_scaled(const SymmetricMatrix&, double);
  friend class SpectrumResult;

  Eigen::MatrixXd m_;
};

/// Eigenvalues ascending (lambda_1 <= ... <= lambda_n); column i of
/// `eigenvectors` belongs to eigenvalue i.
class SpectrumResult {
 public:
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;

  /// Q diag(f(lambda)) Q^T.
  template <typename F>
  SymmetricMatrix apply(F&& f) const {
    Eigen::VectorXd mapped = eigenvalues.unaryExpr(f);
    Eigen::MatrixXd out = eigenvectors * mapped.asDiagonal() * eigenvectors.transpose();
    return SymmetricMatrix(0.5 * (out + out.transpose()), SymmetricMatrix::Trusted{});
  }

  /// Second-largest eigenvalue, lambda_{n-1}. Requires n >= 2.
  double second_largest() const;
};

/// Thrown when the symmetric QR iteration does not converge.
class EigenSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Symmetric eigendecomposition. Backed by Eigen's tridiagonal QR solver,
/// whose budget is 30 sweeps per eigenvalue; exceeding it throws EigenSolverError.
SpectrumResult sym_eigen(const SymmetricMatrix& m);

/// exp(-t m) through the eigendecomposition of m. Requires t >= 0.
SymmetricMatrix expm_scaled(const SymmetricMatrix& m, double t);

/// Eigenvalues of a I + b (J - I) on n >= 2 nodes.
struct StructuredEigs {
  double simple;    // a + (n-1) b, multiplicity 1, eigenvector 1
  double repeated;  // a - b, multiplicity n-1
};
StructuredEigs structured_eigs(double a, double b, std::size_t n);

/// Materializes a I + b (J - I).
SymmetricMatrix structured_matrix(double a, double b, std::size_t n);

/// (I - J/n) applied to every column.
StateBlock project_disagreement(const StateBlock& z);

/// Euclidean distance from z to the agreement subspace span{1}, aggregated
/// over columns.
double dist_to_agreement(const StateBlock& z);

}  // namespace erc
