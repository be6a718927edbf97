#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "erconsensus/spectral.hpp"

namespace erc {

/// The sampling interval used when none is given: delta = 1/n.
double default_delta(std::size_t n);

/// kappa_k such that E[L^k] = kappa_k (nI - J) for G(n, p), k = 1..4.
std::array<double, 4> kappa_coefficients(std::size_t n, double p);

/// Rate constant of the fourth-order truncation of E[exp(-2 delta L)]:
///
///   mu = -2 delta k1 + 2 delta^2 k2 - (4/3) delta^3 k3 + (2/3) delta^4 k4
///
/// so that E[exp(-2 delta L)] ~= I + mu (nI - J). Defaults to delta = 1/n.
double mu(std::size_t n, double p, std::optional<double> delta = std::nullopt);

struct MomentSet {
  std::size_t n = 0;
  double p = 0.0;
  double delta = 0.0;
  std::array<double, 4> kappa{};
  double mu = 0.0;

  double n_mu() const { return static_cast<double>(n) * mu; }
  /// 1 + n mu, the approximate second-largest eigenvalue of E[exp(-2 delta L)].
  double lambda_second_largest() const { return 1.0 + n_mu(); }
};

MomentSet moment_set(std::size_t n, double p, std::optional<double> delta = std::nullopt);

/// Flat object {n, p, delta, kappa1..kappa4, mu, n_mu, lambda_n_minus_1}.
void to_json(nlohmann::json& j, const MomentSet& m);

/// Closed form kappa_k (nI - J) for k in 1..4.
SymmetricMatrix expected_laplacian_power(std::size_t n, double p, int k);

/// Maximum node count accepted by the enumeration oracles (2^10 graphs).
inline constexpr std::size_t kMaxExhaustiveNodes = 5;

/// E[L^k] by enumerating every graph on n <= 5 nodes with its probability
/// weight. Terms are combined by pairwise summation.
SymmetricMatrix exhaustive_expected_power(std::size_t n, double p, int k);

/// E[exp(-t L)] by enumeration over every graph on n <= 5 nodes, each
/// exponential computed exactly through its eigendecomposition.
SymmetricMatrix exhaustive_expected_exponential(std::size_t n, double p, double t);

/// I + mu (nI - J).
SymmetricMatrix expected_exp_approx(std::size_t n, double p,
                                    std::optional<double> delta = std::nullopt);

/// 1 + n mu.
double lambda_second_largest(std::size_t n, double p, std::optional<double> delta = std::nullopt);

struct MonteCarloExponential {
  std::size_t samples = 0;
  /// Sample mean of exp(-2 delta L(G_i)).
  SymmetricMatrix mean;
  /// Element-wise standard error of `mean`.
  Eigen::MatrixXd std_error;
  /// Second-largest eigenvalue of `mean`.
  double lambda_second_largest = 0.0;
  /// Sample mean of (tr exp(-2 delta L(G_i)) - 1)/(n - 1). By exchangeability
  /// the expected matrix acts as a multiple of the identity on the complement
  /// of span{1}, so this is an unbiased estimate of its lambda_{n-1}.
  double lambda_trace = 0.0;
  double lambda_trace_std_error = 0.0;
  /// Sample mean of (2 delta)^5/5! times the mean fifth power of the Laplacian
  /// eigenvalues on the complement of span{1}: the first neglected Taylor term.
  double fifth_order_term = 0.0;
};

/// Monte Carlo estimate of E[exp(-2 delta L)]. Sample i is drawn from stream i
/// of `master_seed`; partial sums are reduced in fixed blocks so the result
/// does not depend on `threads`.
MonteCarloExponential mc_expected_exponential(std::size_t n, double p, double delta,
                                              std::size_t samples, std::uint64_t master_seed,
                                              std::size_t threads = 0);

}  // namespace erc
