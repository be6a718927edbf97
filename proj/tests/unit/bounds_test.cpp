#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "erconsensus/bounds.hpp"
#include "erconsensus/moments.hpp"

using namespace erc;

TEST_CASE("expected_decrease_bound examples") {
  CHECK(expected_decrease_bound(50, 0.03, std::nullopt, 0.0) == 0.0);
  const double fig1 = expected_decrease_bound(50, 0.03, std::nullopt, 500000.0);
  CHECK(std::abs(fig1 - (-0.0561 * 500000.0)) <= 0.0001 * 500000.0);
  CHECK(fig1 == doctest::Approx(-28047.359614719995).epsilon(1e-12));
  CHECK(expected_decrease_bound(10, 0.01, std::nullopt, 1.0) == doctest::Approx(-0.016370889546667).epsilon(1e-12));
  CHECK_THROWS_AS(expected_decrease_bound(10, 0.01, std::nullopt, -1.0), std::invalid_argument);
}

TEST_CASE("tail_probability_bound examples") {
  CHECK(tail_probability_bound(10, 0.01, std::nullopt, 100000.0, 1e300, 10).raw < 1e-290);

  const auto start = tail_probability_bound(10, 0.01, std::nullopt, 2.0, 4.0, 0);
  CHECK(start.raw == 0.5);
  CHECK(start.capped == 0.5);

  const auto fig2 = tail_probability_bound(10, 0.01, std::nullopt, 100000.0, 3.0, 1000);
  CHECK(std::abs(fig2.raw - 2.3e-3) <= 0.05e-3);
  CHECK(fig2.raw == doctest::Approx(0.0022607468020799).epsilon(1e-9));
  CHECK(fig2.capped == fig2.raw);

  const auto early = tail_probability_bound(10, 0.01, std::nullopt, 100000.0, 3.0, 10);
  CHECK(early.raw > 1.0);
  CHECK(early.capped == 1.0);

  CHECK_THROWS_AS(tail_probability_bound(10, 0.01, std::nullopt, 1.0, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(tail_probability_bound(10, 0.01, std::nullopt, 1.0, -2.0, 1), std::invalid_argument);
}

TEST_CASE("contraction factor stays positive for long sampling intervals") {
  // The quartic truncation of exp(-x) is positive for all x, so 1 + n mu never reaches zero.
  for (std::size_t n : {2, 3, 10, 40}) {
    for (double p : {0.1, 0.5, 1.0}) {
      for (double delta : {0.01, 0.3, 1.0, 5.0}) {
        CHECK(contraction_factor(n, p, delta) > 0.0);
      }
    }
  }
}

TEST_CASE("tail sequence decays geometrically and scales linearly") {
  for (std::size_t n : {2, 10, 50}) {
    for (double p : {0.01, 0.1, 0.5}) {
      const double factor = lambda_second_largest(n, p);
      const BoundReport report = make_bound_report(n, p, std::nullopt, 1e6, 0.5, 400);
      REQUIRE(report.tail.size() == 401);
      for (std::size_t N = 1; N < report.tail.size(); ++N) {
        CHECK(report.tail[N].capped <= report.tail[N - 1].capped);
        CHECK(report.tail[N].raw / report.tail[N - 1].raw == doctest::Approx(factor).epsilon(1e-15));
        const auto direct = tail_probability_bound(n, p, std::nullopt, 1e6, 0.5, N);
        CHECK(report.tail[N].raw == doctest::Approx(direct.raw).epsilon(1e-12));
      }
      CHECK(report.decrease_bound_coefficient == lambda_second_largest(n, p) - 1.0);
      CHECK(report.n_mu == doctest::Approx(report.decrease_bound_coefficient).epsilon(1e-15));

      const auto base = tail_probability_bound(n, p, std::nullopt, 10.0, 1000.0, 7).raw;
      CHECK(tail_probability_bound(n, p, std::nullopt, 30.0, 1000.0, 7).raw == doctest::Approx(3 * base));
      CHECK(tail_probability_bound(n, p, std::nullopt, 10.0, 2000.0, 7).raw == doctest::Approx(base / 2));
      CHECK(expected_decrease_bound(n, p, std::nullopt, 8.0) ==
            doctest::Approx(8.0 * expected_decrease_bound(n, p, std::nullopt, 1.0)));
    }
  }
}

TEST_CASE("bound report serialization") {
  const BoundReport report = make_bound_report(10, 0.01, std::nullopt, 100000.0, 3.0, 3);
  const nlohmann::json j = report;
  CHECK(j["n"] == 10);
  CHECK(j["gamma"] == 3.0);
  CHECK(j["tail"].size() == 4);
  CHECK(j["tail"][2]["N"] == 2);

  std::ostringstream csv;
  write_tail_csv(csv, report);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  CHECK(line == "N,bound_capped,bound_raw");
  std::getline(lines, line);
  CHECK(line == "0,1,33333.333333333336");
}
