#include "vicar/topology.hpp"

#include <algorithm>
#include <regex>
#include <stdexcept>

#include <fmt/core.h>

namespace vicar {

Topology Topology::erdos_renyi(std::size_t n, double p) {
  if (n < 2) throw std::invalid_argument("ER graph needs at least 2 nodes");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(fmt::format("ER edge probability {} not in [0, 1]", p));
  return Topology(Kind::kErdosRenyi, n, p, 0, 0);
}

Topology Topology::lattice(std::size_t rows, std::size_t cols) {
  if (rows < 3 || cols < 3)
    throw std::invalid_argument(
        fmt::format("lattice needs rows, cols >= 3, got {}x{}", rows, cols));
  return Topology(Kind::kLattice, rows * cols, 0.0, rows, cols);
}

Topology Topology::parse(const std::string& text) {
  if (text == "dyad") return dyad();
  static const std::regex er(R"(er\((\d+),([0-9.eE+-]+)\))");
  static const std::regex lat(R"(lattice\((\d+)x(\d+)\))");
  std::smatch match;
  if (std::regex_match(text, match, er))
    return erdos_renyi(std::stoul(match[1]), std::stod(match[2]));
  if (std::regex_match(text, match, lat))
    return lattice(std::stoul(match[1]), std::stoul(match[2]));
  throw std::invalid_argument("unknown topology '" + text + "'");
}

std::string Topology::to_string() const {
  switch (kind_) {
    case Kind::kDyad: return "dyad";
    case Kind::kErdosRenyi: return fmt::format("er({},{})", nodes_, p_);
    case Kind::kLattice: return fmt::format("lattice({}x{})", rows_, cols_);
  }
  return "?";
}

Adjacency build_topology(const Topology& topology, Rng& rng) {
  const std::size_t n = topology.node_count();
  Adjacency adj(n);
  switch (topology.kind()) {
    case Topology::Kind::kDyad:
      adj[0] = {1};
      adj[1] = {0};
      break;
    case Topology::Kind::kErdosRenyi: {
      std::uniform_real_distribution<double> coin(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (coin(rng) < topology.edge_probability()) {
            adj[i].push_back(j);
            adj[j].push_back(i);
          }
        }
      }
      break;
    }
    case Topology::Kind::kLattice: {
      const std::size_t rows = topology.rows();
      const std::size_t cols = topology.cols();
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          auto& nb = adj[r * cols + c];
          nb = {((r + rows - 1) % rows) * cols + c, ((r + 1) % rows) * cols + c,
                r * cols + (c + cols - 1) % cols, r * cols + (c + 1) % cols};
        }
      }
      break;
    }
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

std::size_t edge_count(const Adjacency& adjacency) {
  std::size_t degree_sum = 0;
  for (const auto& nb : adjacency) degree_sum += nb.size();
  return degree_sum / 2;
}

}  // namespace vicar
