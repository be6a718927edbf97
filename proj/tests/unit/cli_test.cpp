#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "erconsensus/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = erc::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  return lines;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> values;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) values.push_back(std::stod(cell));
  return values;
}

}  // namespace

TEST_CASE("mu prints the moment set") {
  const Result r = invoke({"mu", "--n", "50", "--p", "0.03"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["n_mu"].get<double>() == doctest::Approx(-0.0561).epsilon(0.002));
  CHECK(j["kappa1"].get<double>() == doctest::Approx(0.03).epsilon(1e-12));
  CHECK(j["delta"].get<double>() == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("usage errors name the flag") {
  Result r = invoke({"mu", "--n", "0", "--p", "0.1"});
  CHECK(r.code == erc::cli::kUsageError);
  CHECK(r.err.find("--n") != std::string::npos);
  r = invoke({"mu", "--n", "5", "--p", "1.5"});
  CHECK(r.code == erc::cli::kUsageError);
  CHECK(r.err.find("--p") != std::string::npos);
  CHECK(invoke({}).code == erc::cli::kUsageError);
  CHECK(invoke({"frobnicate"}).code == erc::cli::kUsageError);
  CHECK(invoke({"simulate", "--init", "spiral"}).code == erc::cli::kUsageError);
  CHECK(invoke({"fig-prob", "--gamma", "-1"}).code == erc::cli::kUsageError);
  CHECK(invoke({"validate-moments", "--n", "6"}).code == erc::cli::kUsageError);
}

TEST_CASE("help lists defaults") {
  Result r = invoke({"fig-prob", "--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("--gamma") != std::string::npos);
  CHECK(r.out.find("1000") != std::string::npos);
  r = invoke({"--help"});
  CHECK(r.code == 0);
  for (const char* name : {"mu", "simulate", "fig-vdiff", "fig-prob", "validate-moments"})
    CHECK(r.out.find(name) != std::string::npos);
  CHECK(invoke({"--version"}).code == 0);
}

TEST_CASE("simulate writes a config echo and a trace") {
  const Result r = invoke({"simulate", "--steps", "20"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# command=simulate\n", 0) == 0);
  CHECK(r.out.find("# seed=1\n") != std::string::npos);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 22);
  CHECK(lines[0] == "k,V,zhat_norm_sq,mean_dim0,mean_dim1");
  CHECK(fields(lines[1])[1] == doctest::Approx(500000.0).epsilon(1e-12));
  CHECK(r.err.find("final V") != std::string::npos);

  const Result again = invoke({"simulate", "--steps", "20"});
  CHECK(again.out == r.out);
  const Result other = invoke({"simulate", "--steps", "20", "--seed", "2"});
  CHECK(other.out != r.out);
}

TEST_CASE("simulate without edges keeps V constant") {
  const Result r = invoke({"simulate", "--n", "7", "--p", "0", "--steps", "10", "--init", "gaussian:2"});
  REQUIRE(r.code == 0);
  const auto lines = data_lines(r.out);
  const double v0 = fields(lines[1])[1];
  for (std::size_t i = 2; i < lines.size(); ++i) CHECK(fields(lines[i])[1] == doctest::Approx(v0).epsilon(1e-12));
}

TEST_CASE("simulate on a certain edge between two agents") {
  const Result r = invoke({"simulate", "--n", "2", "--p", "1", "--delta", "0.5", "--steps", "1", "--init",
                           "explicit:1,-1"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("final state: 0.36787944117144") != std::string::npos);
}

TEST_CASE("seed environment variable") {
  const Result base = invoke({"simulate", "--steps", "5", "--seed", "42"});
  ::setenv(erc::cli::kSeedEnvVar, "42", 1);
  const Result env = invoke({"simulate", "--steps", "5"});
  ::setenv(erc::cli::kSeedEnvVar, "not-a-number", 1);
  const Result bad = invoke({"simulate", "--steps", "5"});
  ::unsetenv(erc::cli::kSeedEnvVar);
  CHECK(env.out == base.out);
  CHECK(bad.code == erc::cli::kUsageError);
  CHECK(bad.err.find(erc::cli::kSeedEnvVar) != std::string::npos);
}

TEST_CASE("fig-prob output") {
  Result r = invoke({"fig-prob", "--gamma", "1e12", "--trials", "10", "--horizon", "1000"});
  REQUIRE(r.code == 0);
  auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 1002);
  CHECK(lines[0] == "N,empirical,bound_capped,bound_raw");
  for (std::size_t i = 1; i < lines.size(); ++i) CHECK(fields(lines[i])[1] == 0.0);

  r = invoke({"fig-prob", "--trials", "10", "--horizon", "1000"});
  REQUIRE(r.code == 0);
  lines = data_lines(r.out);
  CHECK(std::abs(fields(lines.back())[3] - 2.3e-3) <= 0.05e-3);
}

TEST_CASE("fig-vdiff writes csv and svg") {
  const auto dir = std::filesystem::temp_directory_path() / "erconsensus_cli_test";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "vdiff.csv").string();
  const auto svg = (dir / "vdiff.svg").string();
  const Result r = invoke({"fig-vdiff", "--n", "8", "--p", "0.3", "--steps", "5", "--inner-samples", "20", "--out",
                           csv, "--svg", svg, "--threads", "2"});
  REQUIRE(r.code == 0);
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("# inner_step=double-interval\n") != std::string::npos);
  CHECK(data_lines(text.str()).size() == 6);
  std::ifstream plot(svg);
  std::string first;
  std::getline(plot, first);
  CHECK(first.rfind("<svg", 0) == 0);
  std::filesystem::remove_all(dir);

  CHECK(invoke({"fig-vdiff", "--inner-step", "sideways"}).code == erc::cli::kUsageError);
}

TEST_CASE("write failures map to the io exit code") {
  const Result r = invoke({"simulate", "--steps", "2", "--out", "/nonexistent-dir/trace.csv"});
  CHECK(r.code == erc::cli::kIoError);
  CHECK(r.err.find("/nonexistent-dir/trace.csv") != std::string::npos);
}

TEST_CASE("validate-moments exit codes") {
  Result r = invoke({"validate-moments", "--n", "3", "--p", "0.5"});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["passed"] == true);
  r = invoke({"validate-moments", "--n", "10", "--p", "0.5", "--mode", "mc", "--samples", "200", "--delta", "0.5",
              "--tolerance", "1e-9"});
  CHECK(r.code == erc::cli::kValidationFailure);
  CHECK(nlohmann::json::parse(r.out)["passed"] == false);
}
