#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "erconsensus/random.hpp"
#include "erconsensus/spectral.hpp"

namespace erc {

using Edge = std::pair<std::size_t, std::size_t>;

/// Undirected simple graph on nodes 0..n-1 stored as a dense symmetric
/// adjacency mask. Immutable once constructed.
class Graph {
 public:
  /// Edgeless graph on n nodes.
  explicit Graph(std::size_t n);
  /// Throws std::invalid_argument on self loops or out-of-range endpoints.
  /// Duplicate edges are collapsed.
  Graph(std::size_t n, const std::vector<Edge>& edges);

  static Graph complete(std::size_t n);
  static Graph path(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool has_edge(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }
  std::size_t edge_count() const noexcept { return edge_count_; }
  std::size_t degree(std::size_t i) const;
  /// Edges with i < j in row-major order.
  std::vector<Edge> edges() const;

  bool operator==(const Graph& other) const = default;

 private:
  std::size_t n_;
  std::size_t edge_count_ = 0;
  std::vector<std::uint8_t> adjacency_;
};

/// G(n, p): each pair i < j is drawn once, row-major, from rng.
Graph sample_er(std::size_t n, double p, RandomSource& rng);

/// L = D - A.
SymmetricMatrix laplacian(const Graph& g);

/// Breadth-first reachability from node 0.
bool is_connected(const Graph& g);

/// Node sets of the connected components, each sorted, ordered by smallest node.
std::vector<std::vector<std::size_t>> connected_components(const Graph& g);

/// Edge-list text: a header line "n=<n>" followed by one 1-indexed "i j" per line.
std::string to_edge_list(const Graph& g);
Graph parse_edge_list(std::string_view text);

}  // namespace erc
