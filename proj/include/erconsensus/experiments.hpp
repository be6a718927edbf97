#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "erconsensus/consensus.hpp"

namespace erc {

/// How the conditional expected decrease in V is sampled at each step.
///
/// DoubleInterval propagates the disagreement with exp(-2 delta L(G)) and is
/// the procedure behind the reference decrease-vs-bound study. Dynamics
/// propagates with the one-step operator exp(-delta L(G)); its mean equals
/// zhat^T (E[exp(-2 delta L)] - I) zhat, which the bound tracks to within
/// the truncation error only.
enum class InnerPropagator { DoubleInterval, Dynamics };

InnerPropagator parse_inner_propagator(std::string_view text);
std::string to_string(InnerPropagator propagator);

struct VdiffRow {
  std::size_t k = 0;
  double empirical = 0.0;  // sample mean of V(next) - V(zhat(k))
  double std_error = 0.0;
  double bound = 0.0;  // n mu ||zhat(k)||^2
  double V = 0.0;
  std::size_t inner_samples = 0;
};

/// One consensus trajectory with `config.steps` steps. Before each step the
/// conditional expected decrease is estimated from `inner_samples` graphs
/// drawn from stream steps + k; the trajectory itself uses stream k, so the
/// inner estimate never perturbs it.
std::vector<VdiffRow> vdiff_experiment(const RunConfig& config, std::size_t inner_samples,
                                       InnerPropagator propagator = InnerPropagator::DoubleInterval,
                                       std::size_t threads = 0);

/// Columns k,empirical,bound,V.
void write_vdiff_csv(std::ostream& out, const std::vector<VdiffRow>& rows);

struct ProbRow {
  std::size_t N = 0;
  double empirical = 0.0;  // fraction of trials with max_{N<=k<=horizon} ||zhat(k)||^2 >= gamma
  double bound_capped = 0.0;
  double bound_raw = 0.0;
  std::size_t trials = 0;
};

/// `trials` independent trajectories of `horizon` steps; trial t uses master
/// seed derive_seed(config.master_seed, t). Rows cover N = 0..horizon.
std::vector<ProbRow> prob_experiment(const RunConfig& config, double gamma, std::size_t trials,
                                     std::size_t horizon, std::size_t threads = 0);

/// Columns N,empirical,bound_capped,bound_raw.
void write_prob_csv(std::ostream& out, const std::vector<ProbRow>& rows);

enum class ValidationMode { Exhaustive, MonteCarlo };

ValidationMode parse_validation_mode(std::string_view text);

struct MomentValidationReport {
  std::size_t n = 0;
  double p = 0.0;
  double delta = 0.0;
  ValidationMode mode = ValidationMode::Exhaustive;
  std::size_t samples = 0;
  double tolerance = 0.0;

  /// max |closed form - oracle| of E[L^k], k = 1..4 (exhaustive mode only).
  std::vector<double> power_deviation;
  /// max |oracle E[exp(-2 delta L)] - (I + mu (nI - J))|.
  double exponential_deviation = 0.0;
  double lambda_oracle = 0.0;
  double lambda_closed_form = 0.0;
  double lambda_deviation = 0.0;
  /// First neglected Taylor term: (2 delta)^5/5! times the eigenvalue of
  /// E[L^5] on the disagreement subspace (its largest).
  double fifth_order_term = 0.0;
  /// Monte Carlo only.
  double lambda_std_error = 0.0;
  double lambda_trace = 0.0;
  double max_element_std_error = 0.0;

  bool passed = false;
};

/// Compares the closed forms with an oracle. Exhaustive mode requires n <= 5
/// and passes when every power deviation is within `tolerance` (default
/// 1e-12) and the eigenvalue gap is below the fifth-order term. Monte Carlo
/// mode passes when |lambda_{n-1}(mean) - (1 + n mu)| <= tolerance (default
/// 5e-3).
MomentValidationReport moment_validation(std::size_t n, double p, ValidationMode mode,
                                         std::size_t samples, std::optional<double> delta,
                                         std::optional<double> tolerance, std::uint64_t seed,
                                         std::size_t threads = 0);

void to_json(nlohmann::json& j, const MomentValidationReport& report);

}  // namespace erc
