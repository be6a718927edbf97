#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "erconsensus/graph.hpp"
#include "erconsensus/state.hpp"

namespace erc {

/// Initial condition: `circle:<radius>`, `gaussian:<sd>` or `explicit:v1,v2,...`.
/// Explicit values are agent-major (all dimensions of agent 0 first).
struct InitSpec {
  enum class Kind { Circle, Gaussian, Explicit };

  Kind kind = Kind::Circle;
  double parameter = 100.0;
  std::vector<double> values;

  static InitSpec parse(std::string_view text);
  std::string to_string() const;
  /// Dimension implied for n agents, if the initial condition fixes one.
  std::optional<std::size_t> implied_dims(std::size_t agents) const;
};

/// Agent i at radius (cos(2 pi i/n), sin(2 pi i/n)), i = 0..n-1.
StateBlock init_circle(std::size_t agents, double radius);

/// Builds z(0). Gaussian draws come from stream `stream_id` of `seed`.
StateBlock make_initial_state(const InitSpec& init, std::size_t agents, std::size_t dims,
                              std::uint64_t seed, std::uint64_t stream_id);

/// exp(-delta L(g)) applied to every column of z. Computed one connected
/// component at a time; isolated nodes are left untouched.
StateBlock step(const StateBlock& z, const Graph& g, double delta);

/// exp(-t L(g)) assembled from per-component eigendecompositions. Matches
/// expm_scaled(laplacian(g), t).
SymmetricMatrix propagator(const Graph& g, double t);

/// V(z) = (1/n) z^T (nI - J) z summed over columns, evaluated as
/// (1/n) sum_{i<j} (z_i - z_j)^2.
double lyapunov(const StateBlock& z);

struct RunConfig {
  std::size_t n = 50;
  double p = 0.03;
  std::optional<double> delta;
  std::size_t steps = 1000;
  std::optional<std::size_t> dims;
  InitSpec init;
  std::uint64_t master_seed = 1;
  bool record_states = false;

  double resolved_delta() const;
  std::size_t resolved_dims() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct TraceRow {
  std::size_t k = 0;
  double V = 0.0;
  double zhat_norm_sq = 0.0;
  std::vector<double> mean;
};

struct Trace {
  std::vector<TraceRow> rows;  // k = 0..steps
  std::vector<StateBlock> states;  // filled only when record_states is set
  StateBlock final_state;
};

/// Simulates z(k+1) = exp(-delta L_k) z(k), drawing G_k from stream k of the
/// master seed and sharing it across all state dimensions.
Trace run(const RunConfig& config);

/// The initial state a run starts from.
StateBlock initial_state(const RunConfig& config);

/// Columns k,V,zhat_norm_sq,mean_dim0[,mean_dim1,...]; 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace erc
