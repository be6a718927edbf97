#include "erconsensus/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erconsensus/graph.hpp"
#include "erconsensus/parallel.hpp"

namespace erc {

namespace {

void require_nodes(std::size_t n, const char* where) {
  if (n < 2) throw std::invalid_argument(std::string(where) + ": n must be at least 2");
}

void require_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(where) + ": p must lie in [0, 1]");
}

double resolve_delta(std::size_t n, std::optional<double> delta) {
  const double d = delta.value_or(default_delta(n));
  if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("delta must be positive");
  return d;
}

Eigen::MatrixXd pairwise_sum(std::vector<Eigen::MatrixXd>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return terms[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

/// Calls visit(graph, weight) for every graph on n nodes.
template <typename Visit>
void enumerate_graphs(std::size_t n, double p, Visit&& visit) {
  if (n > kMaxExhaustiveNodes)
    throw std::invalid_argument("exhaustive enumeration is limited to n <= " +
                                std::to_string(kMaxExhaustiveNodes) + " (got n=" + std::to_string(n) + ")");
  std::vector<Edge> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const std::size_t m = pairs.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < m; ++b)
      if ((mask >> b) & 1U) edges.push_back(pairs[b]);
    const auto present = static_cast<double>(edges.size());
    const double weight = std::pow(p, present) * std::pow(1.0 - p, static_cast<double>(m) - present);
    visit(Graph(n, edges), weight);
  }
}

}  // namespace

double default_delta(std::size_t n) {
  if (n == 0) throw std::invalid_argument("n must be positive");
  return 1.0 / static_cast<double>(n);
}

std::array<double, 4> kappa_coefficients(std::size_t n, double p) {
  require_nodes(n, "kappa_coefficients");
  require_probability(p, "kappa_coefficients");
  const double m = static_cast<double>(n);
  const double p2 = p * p;
  const double p3 = p2 * p;
  const double p4 = p3 * p;
  return {
      p,
      (m - 2.0) * p2 + 2.0 * p,
      (m - 2.0) * (m - 4.0) * p3 + 6.0 * (m - 2.0) * p2 + 4.0 * p,
      (m - 7.0) * (m - 3.0) * (m - 2.0) * p4 + 6.0 * (2.0 * m - 7.0) * (m - 2.0) * p3 +
          25.0 * (m - 2.0) * p2 + 8.0 * p,
  };
}

double mu(std::size_t n, double p, std::optional<double> delta) {
  return moment_set(n, p, delta).mu;
}

MomentSet moment_set(std::size_t n, double p, std::optional<double> delta) {
  MomentSet out;
  out.n = n;
  out.p = p;
  out.kappa = kappa_coefficients(n, p);
  out.delta = resolve_delta(n, delta);
  const double d = out.delta;
  const auto& k = out.kappa;
  out.mu = -2.0 * d * k[0] + 2.0 * d * d * k[1] - (4.0 / 3.0) * d * d * d * k[2] +
           (2.0 / 3.0) * d * d * d * d * k[3];
  return out;
}

void to_json(nlohmann::json& j, const MomentSet& m) {
  j = nlohmann::json{{"n", m.n},          {"p", m.p},          {"delta", m.delta},
                     {"kappa1", m.kappa[0]}, {"kappa2", m.kappa[1]}, {"kappa3", m.kappa[2]},
                     {"kappa4", m.kappa[3]}, {"mu", m.mu},       {"n_mu", m.n_mu()},
                     {"lambda_n_minus_1", m.lambda_second_largest()}};
}

SymmetricMatrix expected_laplacian_power(std::size_t n, double p, int k) {
  if (k < 1 || k > 4) throw std::invalid_argument("expected_laplacian_power: k must be in 1..4");
  const double kappa = kappa_coefficients(n, p)[static_cast<std::size_t>(k - 1)];
  return SymmetricMatrix(kappa * SymmetricMatrix::complete_laplacian(n).matrix());
}

SymmetricMatrix exhaustive_expected_power(std::size_t n, double p, int k) {
  require_nodes(n, "exhaustive_expected_power");
  require_probability(p, "exhaustive_expected_power");
  if (k < 1) throw std::invalid_argument("exhaustive_expected_power: k must be at least 1");
  std::vector<Eigen::MatrixXd> terms;
  enumerate_graphs(n, p, [&](const Graph& g, double weight) {
    const Eigen::MatrixXd l = laplacian(g).matrix();
    Eigen::MatrixXd power = l;
    for (int i = 1; i < k; ++i) power = power * l;
    terms.push_back(weight * power);
  });
  return SymmetricMatrix(pairwise_sum(terms, 0, terms.size()));
}

SymmetricMatrix exhaustive_expected_exponential(std::size_t n, double p, double t) {
  require_nodes(n, "exhaustive_expected_exponential");
  require_probability(p, "exhaustive_expected_exponential");
  std::vector<Eigen::MatrixXd> terms;
  enumerate_graphs(n, p, [&](const Graph& g, double weight) {
    terms.push_back(weight * expm_scaled(laplacian(g), t).matrix());
  });
  return SymmetricMatrix(pairwise_sum(terms, 0, terms.size()));
}

SymmetricMatrix expected_exp_approx(std::size_t n, double p, std::optional<double> delta) {
  const double m = mu(n, p, delta);
  return SymmetricMatrix(SymmetricMatrix::identity(n).matrix() +
                         m * SymmetricMatrix::complete_laplacian(n).matrix());
}

double lambda_second_largest(std::size_t n, double p, std::optional<double> delta) {
  return moment_set(n, p, delta).lambda_second_largest();
}

MonteCarloExponential mc_expected_exponential(std::size_t n, double p, double delta,
                                              std::size_t samples, std::uint64_t master_seed,
                                              std::size_t threads) {
  require_nodes(n, "mc_expected_exponential");
  require_probability(p, "mc_expected_exponential");
  if (samples == 0) throw std::invalid_argument("mc_expected_exponential: samples must be at least 1");
  if (!(delta > 0.0)) throw std::invalid_argument("mc_expected_exponential: delta must be positive");

  const auto k = static_cast<Eigen::Index>(n);
  const double t = 2.0 * delta;
  const double fifth_scale = std::pow(t, 5) / 120.0;

  struct Partial {
    Eigen::MatrixXd sum;
    Eigen::MatrixXd sum_sq;
    double lambda_sum = 0.0;
    double lambda_sum_sq = 0.0;
    double fifth_sum = 0.0;
  };

  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<Partial> partials(blocks);

  parallel_for(blocks, threads, [&](std::size_t b) {
    Partial& part = partials[b];
    part.sum = Eigen::MatrixXd::Zero(k, k);
    part.sum_sq = Eigen::MatrixXd::Zero(k, k);
    const std::size_t end = std::min(samples, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      RandomSource rng(master_seed, i);
      const Graph g = sample_er(n, p, rng);
      Eigen::MatrixXd e;
      double trace = static_cast<double>(n);
      double fifth = 0.0;
      if (g.edge_count() == 0) {
        e = Eigen::MatrixXd::Identity(k, k);
      } else {
        const SpectrumResult spectrum = sym_eigen(laplacian(g));
        e = spectrum.apply([t](double lambda) { return std::exp(-t * lambda); }).matrix();
        trace = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
          // Laplacian eigenvalues are non-negative; clamp solver round-off.
          const double lambda = std::max(0.0, spectrum.eigenvalues(j));
          trace += std::exp(-t * lambda);
          fifth += std::pow(lambda, 5);
        }
      }
      const double lambda_perp = (trace - 1.0) / static_cast<double>(n - 1);
      part.sum += e;
      part.sum_sq += e.cwiseProduct(e);
      part.lambda_sum += lambda_perp;
      part.lambda_sum_sq += lambda_perp * lambda_perp;
      part.fifth_sum += fifth / static_cast<double>(n - 1);
    }
  });

  Partial total{Eigen::MatrixXd::Zero(k, k), Eigen::MatrixXd::Zero(k, k)};
  for (const Partial& part : partials) {
    total.sum += part.sum;
    total.sum_sq += part.sum_sq;
    total.lambda_sum += part.lambda_sum;
    total.lambda_sum_sq += part.lambda_sum_sq;
    total.fifth_sum += part.fifth_sum;
  }

  const double count = static_cast<double>(samples);
  MonteCarloExponential out;
  out.samples = samples;
  Eigen::MatrixXd mean = total.sum / count;
  out.mean = SymmetricMatrix(mean);
  if (samples > 1) {
    Eigen::MatrixXd variance = ((total.sum_sq - count * mean.cwiseProduct(mean)) / (count - 1.0)).cwiseMax(0.0);
    out.std_error = (variance / count).cwiseSqrt();
    const double lambda_mean = total.lambda_sum / count;
    const double lambda_var =
        std::max(0.0, (total.lambda_sum_sq - count * lambda_mean * lambda_mean) / (count - 1.0));
    out.lambda_trace_std_error = std::sqrt(lambda_var / count);
  } else {
    out.std_error = Eigen::MatrixXd::Zero(k, k);
  }
  out.lambda_trace = total.lambda_sum / count;
  out.lambda_second_largest = sym_eigen(out.mean).second_largest();
  out.fifth_order_term = fifth_scale * total.fifth_sum / count;
  return out;
}

}  // namespace erc
