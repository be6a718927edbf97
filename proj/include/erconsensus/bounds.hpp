#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace erc {

/// 1 + n mu(n, p, delta). Throws std::domain_error when it is not positive,
/// since the tail bound is not meaningful there.
double contraction_factor(std::size_t n, double p, std::optional<double> delta);

/// Upper bound n mu ||zhat||^2 on E[V(zhat(k+1)) - V(zhat(k)) | zhat(k)].
double expected_decrease_bound(std::size_t n, double p, std::optional<double> delta,
                               double zhat_norm_sq);

struct TailBound {
  double capped = 0.0;  // min(1, raw)
  double raw = 0.0;     // (||zhat(0)||^2 / gamma) (1 + n mu)^N
};

/// Bound on P[sup_{k >= N} ||zhat(k)||^2 >= gamma].
TailBound tail_probability_bound(std::size_t n, double p, std::optional<double> delta,
                                 double zhat0_norm_sq, double gamma, std::size_t N);

struct BoundReport {
  std::size_t n = 0;
  double p = 0.0;
  double delta = 0.0;
  double n_mu = 0.0;
  double decrease_bound_coefficient = 0.0;
  double gamma = 0.0;
  double zhat0_norm_sq = 0.0;
  std::vector<TailBound> tail;  // N = 0..horizon
};

BoundReport make_bound_report(std::size_t n, double p, std::optional<double> delta,
                              double zhat0_norm_sq, double gamma, std::size_t horizon);

void to_json(nlohmann::json& j, const BoundReport& report);

/// Columns N,bound_capped,bound_raw.
void write_tail_csv(std::ostream& out, const BoundReport& report);

}  // namespace erc
