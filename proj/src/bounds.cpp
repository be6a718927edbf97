#include "erconsensus/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "erconsensus/moments.hpp"
#include "erconsensus/output.hpp"

namespace erc {

double contraction_factor(std::size_t n, double p, std::optional<double> delta) {
  const double factor = lambda_second_largest(n, p, delta);
  if (!(factor > 0.0))
    throw std::domain_error("1 + n*mu = " + format_double(factor) +
                            " is not positive; the bounds do not apply at this (n, p, delta)");
  return factor;
}

double expected_decrease_bound(std::size_t n, double p, std::optional<double> delta,
                               double zhat_norm_sq) {
  if (!(zhat_norm_sq >= 0.0)) throw std::invalid_argument("zhat_norm_sq must be non-negative");
  return (contraction_factor(n, p, delta) - 1.0) * zhat_norm_sq;
}

TailBound tail_probability_bound(std::size_t n, double p, std::optional<double> delta,
                                 double zhat0_norm_sq, double gamma, std::size_t N) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(zhat0_norm_sq >= 0.0)) throw std::invalid_argument("zhat0_norm_sq must be non-negative");
  const double factor = contraction_factor(n, p, delta);
  const double raw = zhat0_norm_sq / gamma * std::pow(factor, static_cast<double>(N));
  return {std::min(1.0, raw), raw};
}

BoundReport make_bound_report(std::size_t n, double p, std::optional<double> delta,
                              double zhat0_norm_sq, double gamma, std::size_t horizon) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(zhat0_norm_sq >= 0.0)) throw std::invalid_argument("zhat0_norm_sq must be non-negative");
  const MomentSet moments = moment_set(n, p, delta);
  const double factor = contraction_factor(n, p, delta);

  BoundReport report;
  report.n = n;
  report.p = p;
  report.delta = moments.delta;
  report.n_mu = moments.n_mu();
  report.decrease_bound_coefficient = factor - 1.0;
  report.gamma = gamma;
  report.zhat0_norm_sq = zhat0_norm_sq;
  report.tail.reserve(horizon + 1);
  // Successive terms are formed by one multiplication each so that
  // consecutive uncapped values differ by exactly the contraction factor.
  double raw = zhat0_norm_sq / gamma;
  for (std::size_t N = 0; N <= horizon; ++N) {
    report.tail.push_back({std::min(1.0, raw), raw});
    raw *= factor;
  }
  return report;
}

void to_json(nlohmann::json& j, const BoundReport& report) {
  nlohmann::json tail = nlohmann::json::array();
  for (std::size_t N = 0; N < report.tail.size(); ++N)
    tail.push_back({{"N", N}, {"bound_capped", report.tail[N].capped}, {"bound_raw", report.tail[N].raw}});
  j = nlohmann::json{{"n", report.n},
                     {"p", report.p},
                     {"delta", report.delta},
                     {"n_mu", report.n_mu},
                     {"decrease_bound_coefficient", report.decrease_bound_coefficient},
                     {"gamma", report.gamma},
                     {"zhat0_norm_sq", report.zhat0_norm_sq},
                     {"tail", std::move(tail)}};
}

void write_tail_csv(std::ostream& out, const BoundReport& report) {
  out << "N,bound_capped,bound_raw\n";
  for (std::size_t N = 0; N < report.tail.size(); ++N)
    out << N << ',' << format_double(report.tail[N].capped) << ',' << format_double(report.tail[N].raw) << '\n';
}

}  // namespace erc
