#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "erconsensus/bounds.hpp"
#include "erconsensus/cli.hpp"
#include "erconsensus/consensus.hpp"
#include "erconsensus/experiments.hpp"
#include "erconsensus/graph.hpp"
#include "erconsensus/moments.hpp"

namespace py = pybind11;
using namespace erc;

namespace {

RunConfig make_config(std::size_t n, double p, std::optional<double> delta, std::size_t steps,
                      const std::string& init, std::optional<std::size_t> dims, std::uint64_t seed) {
  RunConfig config;
  config.n = n;
  config.p = p;
  config.delta = delta;
  config.steps = steps;
  config.init = InitSpec::parse(init);
  config.dims = dims;
  config.master_seed = seed;
  config.validate();
  return config;
}

py::dict moments_dict(const MomentSet& m) {
  py::dict d;
  d["n"] = m.n;
  d["p"] = m.p;
  d["delta"] = m.delta;
  d["kappa"] = m.kappa;
  d["mu"] = m.mu;
  d["n_mu"] = m.n_mu();
  d["lambda_n_minus_1"] = m.lambda_second_largest();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Consensus over Erdos-Renyi random graphs";

  m.def("kappa_coefficients", &kappa_coefficients, py::arg("n"), py::arg("p"));
  m.def("mu", &mu, py::arg("n"), py::arg("p"), py::arg("delta") = py::none());
  m.def(
      "moment_set",
      [](std::size_t n, double p, std::optional<double> delta) { return moments_dict(moment_set(n, p, delta)); },
      py::arg("n"), py::arg("p"), py::arg("delta") = py::none());
  m.def(
      "expected_laplacian_power",
      [](std::size_t n, double p, int k) { return Eigen::MatrixXd(expected_laplacian_power(n, p, k).matrix()); },
      py::arg("n"), py::arg("p"), py::arg("k"));
  m.def(
      "exhaustive_expected_power",
      [](std::size_t n, double p, int k) { return Eigen::MatrixXd(exhaustive_expected_power(n, p, k).matrix()); },
      py::arg("n"), py::arg("p"), py::arg("k"));

  m.def(
      "sample_laplacian",
      [](std::size_t n, double p, std::uint64_t seed, std::uint64_t stream) {
        RandomSource rng(seed, stream);
        return Eigen::MatrixXd(laplacian(sample_er(n, p, rng)).matrix());
      },
      py::arg("n"), py::arg("p"), py::arg("seed") = 1, py::arg("stream") = 0,
      "Laplacian of one G(n, p) draw from the given stream.");

  m.def(
      "simulate",
      [](std::size_t n, double p, std::optional<double> delta, std::size_t steps, const std::string& init,
         std::optional<std::size_t> dims, std::uint64_t seed) {
        const Trace trace = run(make_config(n, p, delta, steps, init, dims, seed));
        std::vector<double> v;
        std::vector<double> zhat;
        for (const auto& row : trace.rows) {
          v.push_back(row.V);
          zhat.push_back(row.zhat_norm_sq);
        }
        py::dict d;
        d["V"] = v;
        d["zhat_norm_sq"] = zhat;
        d["final_state"] = trace.final_state.values();
        return d;
      },
      py::arg("n") = 50, py::arg("p") = 0.03, py::arg("delta") = py::none(), py::arg("steps") = 1000,
      py::arg("init") = "circle:100", py::arg("dims") = py::none(), py::arg("seed") = 1);

  m.def("expected_decrease_bound", &expected_decrease_bound, py::arg("n"), py::arg("p"), py::arg("delta"),
        py::arg("zhat_norm_sq"));
  m.def(
      "tail_probability_bound",
      [](std::size_t n, double p, std::optional<double> delta, double zhat0_norm_sq, double gamma, std::size_t N) {
        const TailBound t = tail_probability_bound(n, p, delta, zhat0_norm_sq, gamma, N);
        return py::make_tuple(t.capped, t.raw);
      },
      py::arg("n"), py::arg("p"), py::arg("delta"), py::arg("zhat0_norm_sq"), py::arg("gamma"), py::arg("N"),
      "Returns (capped, raw).");

  m.def(
      "vdiff_experiment",
      [](std::size_t n, double p, std::optional<double> delta, std::size_t steps, std::size_t inner_samples,
         const std::string& inner_step, const std::string& init, std::uint64_t seed, std::size_t threads) {
        const RunConfig config = make_config(n, p, delta, steps, init, std::nullopt, seed);
        const InnerPropagator propagator = parse_inner_propagator(inner_step);
        std::vector<VdiffRow> rows;
        {
          py::gil_scoped_release release;
          rows = vdiff_experiment(config, inner_samples, propagator, threads);
        }
        std::vector<double> empirical, std_error, bound, v;
        for (const auto& row : rows) {
          empirical.push_back(row.empirical);
          std_error.push_back(row.std_error);
          bound.push_back(row.bound);
          v.push_back(row.V);
        }
        py::dict d;
        d["empirical"] = empirical;
        d["std_error"] = std_error;
        d["bound"] = bound;
        d["V"] = v;
        return d;
      },
      py::arg("n") = 50, py::arg("p") = 0.03, py::arg("delta") = py::none(), py::arg("steps") = 100,
      py::arg("inner_samples") = 1000, py::arg("inner_step") = "double-interval", py::arg("init") = "circle:100",
      py::arg("seed") = 1, py::arg("threads") = 0);

  m.def(
      "prob_experiment",
      [](std::size_t n, double p, std::optional<double> delta, double gamma, std::size_t trials, std::size_t horizon,
         const std::string& init, std::uint64_t seed, std::size_t threads) {
        const RunConfig config = make_config(n, p, delta, horizon, init, std::nullopt, seed);
        std::vector<ProbRow> rows;
        {
          py::gil_scoped_release release;
          rows = prob_experiment(config, gamma, trials, horizon, threads);
        }
        std::vector<double> empirical, capped, raw;
        for (const auto& row : rows) {
          empirical.push_back(row.empirical);
          capped.push_back(row.bound_capped);
          raw.push_back(row.bound_raw);
        }
        py::dict d;
        d["empirical"] = empirical;
        d["bound_capped"] = capped;
        d["bound_raw"] = raw;
        return d;
      },
      py::arg("n") = 10, py::arg("p") = 0.01, py::arg("delta") = py::none(), py::arg("gamma") = 3.0,
      py::arg("trials") = 1000, py::arg("horizon") = 1000, py::arg("init") = "circle:100", py::arg("seed") = 1,
      py::arg("threads") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (exit_code, stdout, stderr).");
}
