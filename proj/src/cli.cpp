#include "erconsensus/cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "erconsensus/bounds.hpp"
#include "erconsensus/consensus.hpp"
#include "erconsensus/experiments.hpp"
#include "erconsensus/moments.hpp"
#include "erconsensus/output.hpp"

namespace erc::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return value;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string(kSeedEnvVar) + " is not an unsigned integer: '" + env + "'");
  }
}

/// Writes `text` to `path`, or to `out` when path is "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << text;
  if (!file.flush()) throw IoError("failed writing '" + path + "'");
}

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::size_t threads = 0;
};

void add_seed(CLI::App* cmd, Common& common) {
  cmd->add_option("--seed", common.seed,
                  std::string("Master seed (default: $") + kSeedEnvVar + " or " + std::to_string(kDefaultSeed) + ")");
}

void add_threads(CLI::App* cmd, Common& common) {
  cmd->add_option("--threads", common.threads, "Worker threads; 0 uses all cores. Output does not depend on it")
      ->capture_default_str();
}

struct RunFlags {
  std::size_t n = 50;
  double p = 0.03;
  std::optional<double> delta;
  std::size_t steps = 1000;
  std::optional<std::size_t> dims;
  std::string init = "circle:100";
};

void add_run_flags(CLI::App* cmd, RunFlags& flags, bool with_dims) {
  cmd->add_option("--n", flags.n, "Number of agents")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--p", flags.p, "Edge probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--delta", flags.delta, "Sampling interval (default: 1/n)")->check(CLI::PositiveNumber);
  cmd->add_option("--init", flags.init, "Initial condition: circle:<radius>, gaussian:<sd> or explicit:v1,v2,...")
      ->capture_default_str();
  if (with_dims)
    cmd->add_option("--dims", flags.dims, "State dimension per agent (default: implied by --init, else 2)")
        ->check(CLI::PositiveNumber);
}

RunConfig make_config(const RunFlags& flags, std::size_t steps, std::uint64_t seed) {
  RunConfig config;
  config.n = flags.n;
  config.p = flags.p;
  config.delta = flags.delta;
  config.steps = steps;
  config.dims = flags.dims;
  config.init = InitSpec::parse(flags.init);
  config.master_seed = seed;
  config.validate();
  return config;
}

ConfigEcho echo_run(const std::string& command, const RunConfig& config, const Common& common) {
  return {{"command", command},
          {"n", std::to_string(config.n)},
          {"p", format_double(config.p)},
          {"delta", format_double(config.resolved_delta())},
          {"steps", std::to_string(config.steps)},
          {"dims", std::to_string(config.resolved_dims())},
          {"init", config.init.to_string()},
          {"seed", std::to_string(common.seed)}};
}

std::string with_echo(const ConfigEcho& echo, const std::string& csv) {
  std::ostringstream text;
  write_config_echo(text, echo);
  text << csv;
  return text.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus over Erdos-Renyi random graphs: rate constants, simulation and bound checks",
               "erconsensus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "erconsensus 0.1.0");

  Common common;

  // mu
  std::size_t mu_n = 0;
  double mu_p = 0.0;
  std::optional<double> mu_delta;
  auto* mu_cmd = app.add_subcommand("mu", "Print kappa1..4, mu, n*mu and 1 + n*mu as JSON");
  mu_cmd->add_option("--n", mu_n, "Number of agents")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  mu_cmd->add_option("--p", mu_p, "Edge probability")->required()->check(CLI::Range(0.0, 1.0));
  mu_cmd->add_option("--delta", mu_delta, "Sampling interval (default: 1/n)")->check(CLI::PositiveNumber);

  // simulate
  RunFlags sim;
  std::string sim_out = "-";
  auto* sim_cmd = app.add_subcommand("simulate", "Run time-sampled consensus and write the trace CSV");
  add_run_flags(sim_cmd, sim, true);
  sim_cmd->add_option("--steps", sim.steps, "Number of sampling steps K")->capture_default_str()->check(CLI::PositiveNumber);
  sim_cmd->add_option("--out", sim_out, "Trace CSV path ('-' for stdout)")->capture_default_str();
  add_seed(sim_cmd, common);

  // fig-vdiff
  RunFlags vd;
  std::size_t inner_samples = 1000;
  std::size_t plot_steps = 100;
  std::string inner_step = "double-interval";
  std::string vd_out = "-";
  std::string vd_svg;
  auto* vd_cmd = app.add_subcommand(
      "fig-vdiff", "Expected decrease of V per step against the n*mu*||zhat||^2 bound");
  add_run_flags(vd_cmd, vd, false);
  vd_cmd->add_option("--steps", vd.steps, "Trajectory length")->capture_default_str()->check(CLI::PositiveNumber);
  vd_cmd->add_option("--inner-samples", inner_samples, "Graphs sampled per step for the expectation")
      ->capture_default_str()->check(CLI::PositiveNumber);
  vd_cmd->add_option("--inner-step", inner_step,
                     "Inner propagator: double-interval (exp(-2 delta L)) or dynamics (exp(-delta L))")
      ->capture_default_str()->check(CLI::IsMember({"double-interval", "dynamics"}));
  vd_cmd->add_option("--out", vd_out, "CSV path ('-' for stdout)")->capture_default_str();
  vd_cmd->add_option("--svg", vd_svg, "Optional SVG plot path");
  vd_cmd->add_option("--plot-steps", plot_steps, "Steps shown in the SVG")->capture_default_str();
  add_seed(vd_cmd, common);
  add_threads(vd_cmd, common);

  // fig-prob
  RunFlags pr;
  pr.n = 10;
  pr.p = 0.01;
  double gamma = 3.0;
  std::size_t trials = 1000;
  std::string pr_out = "-";
  std::string pr_svg;
  auto* pr_cmd = app.add_subcommand(
      "fig-prob", "Empirical P[sup_{k>=N} ||zhat(k)||^2 >= gamma] against its geometric bound");
  add_run_flags(pr_cmd, pr, false);
  pr_cmd->add_option("--gamma", gamma, "Disagreement threshold")->capture_default_str()->check(CLI::PositiveNumber);
  pr_cmd->add_option("--trials", trials, "Independent trajectories")->capture_default_str()->check(CLI::PositiveNumber);
  pr_cmd->add_option("--horizon", pr.steps, "Steps per trajectory")->capture_default_str()->check(CLI::PositiveNumber);
  pr_cmd->add_option("--out", pr_out, "CSV path ('-' for stdout)")->capture_default_str();
  pr_cmd->add_option("--svg", pr_svg, "Optional SVG plot path");
  add_seed(pr_cmd, common);
  add_threads(pr_cmd, common);

  // validate-moments
  std::size_t vm_n = 3;
  double vm_p = 0.5;
  std::string mode = "exhaustive";
  std::size_t samples = 20000;
  std::optional<double> vm_delta;
  std::optional<double> tolerance;
  auto* vm_cmd = app.add_subcommand("validate-moments",
                                    "Compare the closed-form moments and 1 + n*mu against an oracle");
  vm_cmd->add_option("--n", vm_n, "Number of agents")->capture_default_str()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 31));
  vm_cmd->add_option("--p", vm_p, "Edge probability")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  vm_cmd->add_option("--mode", mode, "Oracle: exhaustive (n <= 5) or mc")
      ->capture_default_str()->check(CLI::IsMember({"exhaustive", "mc"}));
  vm_cmd->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str()->check(CLI::PositiveNumber);
  vm_cmd->add_option("--delta", vm_delta, "Sampling interval (default: 1/n)")->check(CLI::PositiveNumber);
  vm_cmd->add_option("--tolerance", tolerance,
                     "Pass threshold (default: 1e-12 on moments for exhaustive, 5e-3 on lambda for mc)")
      ->check(CLI::PositiveNumber);
  add_seed(vm_cmd, common);
  add_threads(vm_cmd, common);

  try {
    common.seed = default_seed();
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) err << "run with --help for usage\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (mu_cmd->parsed()) {
      nlohmann::json j = moment_set(mu_n, mu_p, mu_delta);
      out << j.dump(2) << '\n';
      return kSuccess;
    }

    if (sim_cmd->parsed()) {
      const RunConfig config = make_config(sim, sim.steps, common.seed);
      const Trace trace = run(config);
      std::ostringstream csv;
      write_trace_csv(csv, trace);
      emit(sim_out, with_echo(echo_run("simulate", config, common), csv.str()), out);

      std::ostream& summary = sim_out == "-" ? err : out;
      summary << "final V = " << format_double(trace.rows.back().V) << '\n';
      const auto reached = std::find_if(trace.rows.begin(), trace.rows.end(),
                                        [](const TraceRow& row) { return row.zhat_norm_sq < 1e-6; });
      if (reached != trace.rows.end())
        summary << "||zhat||^2 < 1e-6 first at k = " << reached->k << '\n';
      else
        summary << "||zhat||^2 did not reach 1e-6\n";
      if (config.n <= 10) {
        summary << "final state:";
        const StateBlock& z = trace.final_state;
        for (std::size_t i = 0; i < z.agents(); ++i) {
          summary << (i ? "; " : " ");
          for (std::size_t d = 0; d < z.dims(); ++d) summary << (d ? "," : "") << format_double(z(i, d));
        }
        summary << '\n';
      }
      return kSuccess;
    }

    if (vd_cmd->parsed()) {
      const RunConfig config = make_config(vd, vd.steps, common.seed);
      const InnerPropagator propagator = parse_inner_propagator(inner_step);
      const auto rows = vdiff_experiment(config, inner_samples, propagator, common.threads);
      ConfigEcho echo = echo_run("fig-vdiff", config, common);
      echo.emplace_back("inner_samples", std::to_string(inner_samples));
      echo.emplace_back("inner_step", to_string(propagator));
      echo.emplace_back("n_mu", format_double(moment_set(config.n, config.p, config.delta).n_mu()));
      std::ostringstream csv;
      write_vdiff_csv(csv, rows);
      emit(vd_out, with_echo(echo, csv.str()), out);
      if (!vd_svg.empty()) {
        PlotSpec plot{"Expected decrease in V and its bound", "k", "E[V(k+1) - V(k) | zhat(k)]", {}};
        PlotSeries empirical{"empirical", {}, {}, false};
        PlotSeries bound{"bound n*mu*||zhat||^2", {}, {}, true};
        for (const auto& row : rows) {
          if (row.k >= plot_steps) break;
          empirical.x.push_back(static_cast<double>(row.k));
          empirical.y.push_back(row.empirical);
          bound.x.push_back(static_cast<double>(row.k));
          bound.y.push_back(row.bound);
        }
        plot.series = {empirical, bound};
        emit(vd_svg, render_svg(plot), out);
      }
      return kSuccess;
    }

    if (pr_cmd->parsed()) {
      const RunConfig config = make_config(pr, pr.steps, common.seed);
      const auto rows = prob_experiment(config, gamma, trials, pr.steps, common.threads);
      ConfigEcho echo = echo_run("fig-prob", config, common);
      echo.emplace_back("gamma", format_double(gamma));
      echo.emplace_back("trials", std::to_string(trials));
      echo.emplace_back("horizon", std::to_string(pr.steps));
      echo.emplace_back("n_mu", format_double(moment_set(config.n, config.p, config.delta).n_mu()));
      std::ostringstream csv;
      write_prob_csv(csv, rows);
      emit(pr_out, with_echo(echo, csv.str()), out);
      if (!pr_svg.empty()) {
        PlotSpec plot{"Probability of disagreement at least gamma", "N", "P[sup ||zhat(k)||^2 >= gamma]", {}};
        PlotSeries empirical{"empirical", {}, {}, false};
        PlotSeries bound{"bound (capped)", {}, {}, true};
        for (const auto& row : rows) {
          empirical.x.push_back(static_cast<double>(row.N));
          empirical.y.push_back(row.empirical);
          bound.x.push_back(static_cast<double>(row.N));
          bound.y.push_back(row.bound_capped);
        }
        plot.series = {empirical, bound};
        emit(pr_svg, render_svg(plot), out);
      }
      return kSuccess;
    }

    if (vm_cmd->parsed()) {
      const auto report = moment_validation(vm_n, vm_p, parse_validation_mode(mode), samples, vm_delta, tolerance,
                                            common.seed, common.threads);
      nlohmann::json j = report;
      j["seed"] = common.seed;
      out << j.dump(2) << '\n';
      return report.passed ? kSuccess : kValidationFailure;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace erc::cli
