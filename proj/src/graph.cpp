#include "erconsensus/graph.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace erc {

Graph::Graph(std::size_t n) : n_(n), adjacency_(n * n, 0) {
  if (n == 0) throw std::invalid_argument("graph needs at least one node");
}

Graph::Graph(std::size_t n, const std::vector<Edge>& edges) : Graph(n) {
  for (const auto& [i, j] : edges) {
    if (i >= n || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self loops are not allowed");
    if (adjacency_[i * n + j] != 0) continue;
    adjacency_[i * n + j] = 1;
    adjacency_[j * n + i] = 1;
    ++edge_count_;
  }
}

Graph Graph::complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, edges);
}

Graph Graph::path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph(n, edges);
}

std::size_t Graph::degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += adjacency_[i * n_ + j];
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

Graph sample_er(std::size_t n, double p, RandomSource& rng) {
  if (n == 0) throw std::invalid_argument("sample_er: n must be at least 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_er: p must lie in [0, 1]");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) edges.emplace_back(i, j);
  return Graph(n, edges);
}

SymmetricMatrix laplacian(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    l(a, a) += 1.0;
    l(b, b) += 1.0;
    l(a, b) -= 1.0;
    l(b, a) -= 1.0;
  }
  return SymmetricMatrix(l);
}

std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<std::size_t> members;
    std::queue<std::size_t> frontier;
    frontier.push(root);
    seen[root] = true;
    while (!frontier.empty()) {
      const std::size_t v = frontier.front();
      frontier.pop();
      members.push_back(v);
      for (std::size_t w = 0; w < n; ++w) {
        if (!seen[w] && g.has_edge(v, w)) {
          seen[w] = true;
          frontier.push(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

bool is_connected(const Graph& g) { return connected_components(g).size() == 1; }

std::string to_edge_list(const Graph& g) {
  std::ostringstream out;
  out << "n=" << g.size() << '\n';
  for (const auto& [i, j] : g.edges()) out << i + 1 << ' ' << j + 1 << '\n';
  return out.str();
}

namespace {

std::size_t parse_index(std::string_view token, std::string_view what) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw std::invalid_argument("edge list: bad " + std::string(what) + " '" + std::string(token) + "'");
  return value;
}

}  // namespace

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0)
    throw std::invalid_argument("edge list: missing 'n=<n>' header");
  const std::size_t n = parse_index(std::string_view(line).substr(2), "node count");
  std::vector<Edge> edges;
  std::string a, b, extra;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    if (!(fields >> a)) continue;
    if (!(fields >> b) || (fields >> extra))
      throw std::invalid_argument("edge list: expected 'i j' but got '" + line + "'");
    const std::size_t i = parse_index(a, "node index");
    const std::size_t j = parse_index(b, "node index");
    if (i == 0 || j == 0) throw std::invalid_argument("edge list: indices are 1-based");
    edges.emplace_back(i - 1, j - 1);
  }
  return Graph(n, edges);
}

}  // namespace erc
