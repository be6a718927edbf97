#include "erconsensus/consensus.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "erconsensus/moments.hpp"
#include "erconsensus/output.hpp"

namespace erc {

namespace {

// Gaussian initial conditions draw from a stream no step can reach.
constexpr std::uint64_t kInitStream = std::numeric_limits<std::uint64_t>::max();

double parse_number(std::string_view token) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value))
    throw std::invalid_argument("init: bad number '" + std::string(token) + "'");
  return value;
}

/// Index lists and eigendecompositions of every non-trivial component.
struct ComponentPropagator {
  std::vector<Eigen::Index> nodes;
  Eigen::MatrixXd matrix;
};

std::vector<ComponentPropagator> component_propagators(const Graph& g, double t) {
  std::vector<ComponentPropagator> out;
  if (g.edge_count() == 0 || t == 0.0) return out;
  for (const auto& members : connected_components(g)) {
    if (members.size() < 2) continue;
    const auto s = static_cast<Eigen::Index>(members.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
      for (Eigen::Index b = a + 1; b < s; ++b) {
        if (g.has_edge(members[static_cast<std::size_t>(a)], members[static_cast<std::size_t>(b)])) {
          l(a, b) = l(b, a) = -1.0;
          l(a, a) += 1.0;
          l(b, b) += 1.0;
        }
      }
    }
    ComponentPropagator block;
    block.nodes.assign(members.begin(), members.end());
    block.matrix = expm_scaled(SymmetricMatrix(l), t).matrix();
    out.push_back(std::move(block));
  }
  return out;
}

}  // namespace

InitSpec InitSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  InitSpec spec;
  if (kind == "circle" || kind == "gaussian") {
    spec.kind = kind == "circle" ? Kind::Circle : Kind::Gaussian;
    spec.parameter = rest.empty() ? (kind == "circle" ? 100.0 : 1.0) : parse_number(rest);
    if (!(spec.parameter > 0.0))
      throw std::invalid_argument("init: " + std::string(kind) + " parameter must be positive");
    return spec;
  }
  if (kind == "explicit") {
    spec.kind = Kind::Explicit;
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = rest.find(',', start);
      const auto token = rest.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      spec.values.push_back(parse_number(token));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return spec;
  }
  throw std::invalid_argument("init: expected circle:<r>, gaussian:<sd> or explicit:v1,v2,... (got '" +
                              std::string(text) + "')");
}

std::string InitSpec::to_string() const {
  switch (kind) {
    case Kind::Circle:
      return "circle:" + format_double(parameter);
    case Kind::Gaussian:
      return "gaussian:" + format_double(parameter);
    case Kind::Explicit: {
      std::string out = "explicit:";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
      }
      return out;
    }
  }
  return {};
}

std::optional<std::size_t> InitSpec::implied_dims(std::size_t agents) const {
  switch (kind) {
    case Kind::Circle:
      return 2;
    case Kind::Explicit:
      if (agents > 0 && !values.empty() && values.size() % agents == 0) return values.size() / agents;
      return std::nullopt;
    case Kind::Gaussian:
      return std::nullopt;
  }
  return std::nullopt;
}

StateBlock init_circle(std::size_t agents, double radius) {
  if (agents == 0) throw std::invalid_argument("init_circle: need at least one agent");
  if (!(radius > 0.0)) throw std::invalid_argument("init_circle: radius must be positive");
  const auto n = static_cast<Eigen::Index>(agents);
  Eigen::MatrixXd z(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(agents);
    z(i, 0) = radius * std::cos(angle);
    z(i, 1) = radius * std::sin(angle);
  }
  return StateBlock(std::move(z));
}

StateBlock make_initial_state(const InitSpec& init, std::size_t agents, std::size_t dims,
                              std::uint64_t seed, std::uint64_t stream_id) {
  if (agents == 0) throw std::invalid_argument("init: need at least one agent");
  if (dims == 0) throw std::invalid_argument("dims must be at least 1");
  switch (init.kind) {
    case InitSpec::Kind::Circle:
      if (dims != 2) throw std::invalid_argument("dims: circle initial condition is two-dimensional");
      return init_circle(agents, init.parameter);
    case InitSpec::Kind::Gaussian: {
      RandomSource rng(seed, stream_id);
      Eigen::MatrixXd z(static_cast<Eigen::Index>(agents), static_cast<Eigen::Index>(dims));
      for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index d = 0; d < z.cols(); ++d) z(i, d) = init.parameter * rng.normal();
      return StateBlock(std::move(z));
    }
    case InitSpec::Kind::Explicit: {
      if (init.values.size() != agents * dims)
        throw std::invalid_argument("init: explicit state has " + std::to_string(init.values.size()) +
                                    " values, expected n*dims = " + std::to_string(agents * dims));
      Eigen::MatrixXd z(static_cast<Eigen::Index>(agents), static_cast<Eigen::Index>(dims));
      std::size_t next = 0;
      for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index d = 0; d < z.cols(); ++d) z(i, d) = init.values[next++];
      return StateBlock(std::move(z));
    }
  }
  throw std::logic_error("unhandled init kind");
}

StateBlock step(const StateBlock& z, const Graph& g, double delta) {
  if (z.agents() != g.size())
    throw std::invalid_argument("step: state has " + std::to_string(z.agents()) + " agents but graph has " +
                                std::to_string(g.size()) + " nodes");
  if (!(delta >= 0.0)) throw std::invalid_argument("step: delta must be non-negative");
  StateBlock next = z;
  Eigen::MatrixXd& values = next.mutable_values();
  for (const auto& block : component_propagators(g, delta)) {
    const Eigen::MatrixXd local = values(block.nodes, Eigen::all);
    values(block.nodes, Eigen::all) = block.matrix * local;
  }
  return next;
}

SymmetricMatrix propagator(const Graph& g, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagator: t must be non-negative");
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n, n);
  for (const auto& block : component_propagators(g, t)) out(block.nodes, block.nodes) = block.matrix;
  return SymmetricMatrix(out);
}

double lyapunov(const StateBlock& z) {
  const std::size_t n = z.agents();
  if (n < 2) return 0.0;
  const Eigen::MatrixXd& v = z.values();
  double total = 0.0;
  for (Eigen::Index d = 0; d < v.cols(); ++d) {
    double column = 0.0;
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      for (Eigen::Index j = i + 1; j < v.rows(); ++j) {
        const double diff = v(i, d) - v(j, d);
        column += diff * diff;
      }
    total += column;
  }
  return total / static_cast<double>(n);
}

double RunConfig::resolved_delta() const { return delta.value_or(default_delta(n)); }

std::size_t RunConfig::resolved_dims() const {
  if (dims) return *dims;
  return init.implied_dims(n).value_or(2);
}

void RunConfig::validate() const {
  if (n == 0) throw std::invalid_argument("n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("p must lie in [0, 1]");
  if (delta && !(*delta > 0.0 && std::isfinite(*delta))) throw std::invalid_argument("delta must be positive");
  if (steps == 0) throw std::invalid_argument("steps must be at least 1");
  if (dims && *dims == 0) throw std::invalid_argument("dims must be at least 1");
  if (dims) {
    const auto implied = init.implied_dims(n);
    if (init.kind == InitSpec::Kind::Circle && *dims != 2)
      throw std::invalid_argument("dims: circle initial condition is two-dimensional");
    if (init.kind == InitSpec::Kind::Explicit && (!implied || *implied != *dims))
      throw std::invalid_argument("init: explicit state does not have n*dims values");
  } else if (init.kind == InitSpec::Kind::Explicit && !init.implied_dims(n)) {
    throw std::invalid_argument("init: explicit state size is not a multiple of n");
  }
}

StateBlock initial_state(const RunConfig& config) {
  config.validate();
  return make_initial_state(config.init, config.n, config.resolved_dims(), config.master_seed, kInitStream);
}

Trace run(const RunConfig& config) {
  StateBlock z = initial_state(config);
  const double delta = config.resolved_delta();

  Trace trace;
  trace.rows.reserve(config.steps + 1);
  auto record = [&](std::size_t k) {
    trace.rows.push_back({k, lyapunov(z), project_disagreement(z).squared_norm(), z.mean()});
    if (config.record_states) trace.states.push_back(z);
  };

  record(0);
  for (std::size_t k = 0; k < config.steps; ++k) {
    RandomSource rng(config.master_seed, k);
    z = step(z, sample_er(config.n, config.p, rng), delta);
    record(k + 1);
  }
  trace.final_state = std::move(z);
  return trace;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const std::size_t dims = trace.rows.empty() ? 0 : trace.rows.front().mean.size();
  out << "k,V,zhat_norm_sq";
  for (std::size_t d = 0; d < dims; ++d) out << ",mean_dim" << d;
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.k << ',' << format_double(row.V) << ',' << format_double(row.zhat_norm_sq);
    for (double m : row.mean) out << ',' << format_double(m);
    out << '\n';
  }
}

}  // namespace erc
