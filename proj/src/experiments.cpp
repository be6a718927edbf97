#include "erconsensus/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "erconsensus/bounds.hpp"
#include "erconsensus/moments.hpp"
#include "erconsensus/output.hpp"
#include "erconsensus/parallel.hpp"

namespace erc {

InnerPropagator parse_inner_propagator(std::string_view text) {
  if (text == "double-interval") return InnerPropagator::DoubleInterval;
  if (text == "dynamics") return InnerPropagator::Dynamics;
  throw std::invalid_argument("inner-step must be 'double-interval' or 'dynamics'");
}

std::string to_string(InnerPropagator propagator) {
  return propagator == InnerPropagator::DoubleInterval ? "double-interval" : "dynamics";
}

std::vector<VdiffRow> vdiff_experiment(const RunConfig& config, std::size_t inner_samples,
                                       InnerPropagator propagator, std::size_t threads) {
  if (inner_samples == 0) throw std::invalid_argument("inner-samples must be at least 1");
  StateBlock z = initial_state(config);
  const double delta = config.resolved_delta();
  const double inner_t = propagator == InnerPropagator::DoubleInterval ? 2.0 * delta : delta;
  const double coefficient = contraction_factor(config.n, config.p, delta) - 1.0;

  std::vector<VdiffRow> rows;
  rows.reserve(config.steps);
  std::vector<Graph> graphs;
  std::vector<double> diffs(inner_samples);
  for (std::size_t k = 0; k < config.steps; ++k) {
    const StateBlock zhat = project_disagreement(z);
    const double v = lyapunov(zhat);

    RandomSource inner(config.master_seed, config.steps + k);
    graphs.clear();
    for (std::size_t i = 0; i < inner_samples; ++i) graphs.push_back(sample_er(config.n, config.p, inner));
    parallel_for(inner_samples, threads, [&](std::size_t i) {
      diffs[i] = lyapunov(step(zhat, graphs[i], inner_t)) - v;
    });

    double sum = 0.0;
    for (double d : diffs) sum += d;
    const double count = static_cast<double>(inner_samples);
    const double mean = sum / count;
    double sq = 0.0;
    for (double d : diffs) sq += (d - mean) * (d - mean);
    const double std_error = inner_samples > 1 ? std::sqrt(sq / (count - 1.0) / count) : 0.0;

    rows.push_back({k, mean, std_error, coefficient * zhat.squared_norm(), lyapunov(z), inner_samples});

    RandomSource rng(config.master_seed, k);
    z = step(z, sample_er(config.n, config.p, rng), delta);
  }
  return rows;
}

void write_vdiff_csv(std::ostream& out, const std::vector<VdiffRow>& rows) {
  out << "k,empirical,bound,V\n";
  for (const auto& row : rows)
    out << row.k << ',' << format_double(row.empirical) << ',' << format_double(row.bound) << ','
        << format_double(row.V) << '\n';
}

std::vector<ProbRow> prob_experiment(const RunConfig& config, double gamma, std::size_t trials,
                                     std::size_t horizon, std::size_t threads) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const StateBlock z0 = initial_state(config);
  const double delta = config.resolved_delta();
  const double zhat0_norm_sq = project_disagreement(z0).squared_norm();
  const BoundReport report = make_bound_report(config.n, config.p, delta, zhat0_norm_sq, gamma, horizon);

  // M_N = max_{N <= k <= horizon} ||zhat(k)||^2 is non-increasing in N, so
  // each trial exceeds gamma for exactly the first `exceed[t]` values of N.
  std::vector<std::size_t> exceed(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(config.master_seed, t);
    std::vector<double> norms(horizon + 1);
    StateBlock z = z0;
    norms[0] = zhat0_norm_sq;
    for (std::size_t k = 0; k < horizon; ++k) {
      RandomSource rng(seed, k);
      z = step(z, sample_er(config.n, config.p, rng), delta);
      norms[k + 1] = project_disagreement(z).squared_norm();
    }
    double suffix_max = 0.0;
    std::size_t count = 0;
    for (std::size_t N = horizon + 1; N-- > 0;) {
      suffix_max = std::max(suffix_max, norms[N]);
      // Each exp(-delta L) is a contraction on the disagreement subspace, so
      // the suffix maximum must coincide with the current value.
      if (std::abs(suffix_max - norms[N]) > 1e-12 * std::max(1.0, suffix_max))
        throw std::logic_error("disagreement increased along a trajectory at step " + std::to_string(N));
      if (suffix_max >= gamma && count == 0) count = N + 1;
    }
    exceed[t] = count;
  });

  std::vector<ProbRow> rows(horizon + 1);
  for (std::size_t N = 0; N <= horizon; ++N) {
    std::size_t hits = 0;
    for (std::size_t c : exceed) hits += c > N ? 1 : 0;
    rows[N] = {N, static_cast<double>(hits) / static_cast<double>(trials), report.tail[N].capped,
               report.tail[N].raw, trials};
  }
  return rows;
}

void write_prob_csv(std::ostream& out, const std::vector<ProbRow>& rows) {
  out << "N,empirical,bound_capped,bound_raw\n";
  for (const auto& row : rows)
    out << row.N << ',' << format_double(row.empirical) << ',' << format_double(row.bound_capped) << ','
        << format_double(row.bound_raw) << '\n';
}

ValidationMode parse_validation_mode(std::string_view text) {
  if (text == "exhaustive") return ValidationMode::Exhaustive;
  if (text == "mc" || text == "montecarlo") return ValidationMode::MonteCarlo;
  throw std::invalid_argument("mode must be 'exhaustive' or 'mc'");
}

MomentValidationReport moment_validation(std::size_t n, double p, ValidationMode mode,
                                         std::size_t samples, std::optional<double> delta,
                                         std::optional<double> tolerance, std::uint64_t seed,
                                         std::size_t threads) {
  if (mode == ValidationMode::Exhaustive && n > kMaxExhaustiveNodes)
    throw std::invalid_argument("n: exhaustive mode enumerates 2^(n(n-1)/2) graphs and is limited to n <= " +
                                std::to_string(kMaxExhaustiveNodes));
  const MomentSet moments = moment_set(n, p, delta);
  const SymmetricMatrix approx = expected_exp_approx(n, p, moments.delta);

  MomentValidationReport report;
  report.n = n;
  report.p = p;
  report.delta = moments.delta;
  report.mode = mode;
  report.lambda_closed_form = moments.lambda_second_largest();
  const double t = 2.0 * moments.delta;

  if (mode == ValidationMode::Exhaustive) {
    report.tolerance = tolerance.value_or(1e-12);
    bool powers_ok = true;
    for (int k = 1; k <= 4; ++k) {
      const double deviation = (expected_laplacian_power(n, p, k).matrix() -
                                exhaustive_expected_power(n, p, k).matrix()).cwiseAbs().maxCoeff();
      report.power_deviation.push_back(deviation);
      powers_ok = powers_ok && deviation <= report.tolerance;
    }
    const SymmetricMatrix exact = exhaustive_expected_exponential(n, p, t);
    report.exponential_deviation = (exact.matrix() - approx.matrix()).cwiseAbs().maxCoeff();
    report.lambda_oracle = sym_eigen(exact).second_largest();
    report.lambda_deviation = std::abs(report.lambda_oracle - report.lambda_closed_form);
    report.fifth_order_term =
        std::pow(t, 5) / 120.0 * sym_eigen(exhaustive_expected_power(n, p, 5)).eigenvalues.maxCoeff();
    report.passed = powers_ok && report.lambda_deviation <= report.fifth_order_term;
  } else {
    if (samples == 0) throw std::invalid_argument("samples must be at least 1");
    report.tolerance = tolerance.value_or(5e-3);
    report.samples = samples;
    const MonteCarloExponential mc = mc_expected_exponential(n, p, moments.delta, samples, seed, threads);
    report.exponential_deviation = (mc.mean.matrix() - approx.matrix()).cwiseAbs().maxCoeff();
    report.lambda_oracle = mc.lambda_second_largest;
    report.lambda_deviation = std::abs(report.lambda_oracle - report.lambda_closed_form);
    report.lambda_trace = mc.lambda_trace;
    report.lambda_std_error = mc.lambda_trace_std_error;
    report.max_element_std_error = mc.std_error.maxCoeff();
    report.fifth_order_term = mc.fifth_order_term;
    report.passed = report.lambda_deviation <= report.tolerance;
  }
  return report;
}

void to_json(nlohmann::json& j, const MomentValidationReport& report) {
  j = nlohmann::json{{"n", report.n},
                     {"p", report.p},
                     {"delta", report.delta},
                     {"mode", report.mode == ValidationMode::Exhaustive ? "exhaustive" : "mc"},
                     {"tolerance", report.tolerance},
                     {"exponential_deviation", report.exponential_deviation},
                     {"lambda_oracle", report.lambda_oracle},
                     {"lambda_closed_form", report.lambda_closed_form},
                     {"lambda_deviation", report.lambda_deviation},
                     {"fifth_order_term", report.fifth_order_term},
                     {"passed", report.passed}};
  if (report.mode == ValidationMode::Exhaustive) {
    nlohmann::json powers = nlohmann::json::object();
    for (std::size_t k = 0; k < report.power_deviation.size(); ++k)
      powers["k" + std::to_string(k + 1)] = report.power_deviation[k];
    j["power_deviation"] = std::move(powers);
    j["max_power_deviation"] = report.power_deviation.empty()
                                   ? 0.0
                                   : *std::max_element(report.power_deviation.begin(), report.power_deviation.end());
  } else {
    j["samples"] = report.samples;
    j["lambda_std_error"] = report.lambda_std_error;
    j["lambda_trace"] = report.lambda_trace;
    j["max_element_std_error"] = report.max_element_std_error;
  }
}

}  // namespace erc
