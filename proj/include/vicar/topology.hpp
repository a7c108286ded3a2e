#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vicar/random.hpp"

namespace vicar {

// Sorted neighbour lists; symmetric, no self-loops.
using Adjacency = std::vector<std::vector<std::size_t>>;

class Topology {
 public:
  enum class Kind { kDyad, kErdosRenyi, kLattice };

  static Topology dyad() { return Topology(Kind::kDyad, 2, 0.0, 1, 2); }
  static Topology erdos_renyi(std::size_t n, double p);
  // Periodic boundaries, Von Neumann neighbourhood; rows, cols >= 3.
  static Topology lattice(std::size_t rows, std::size_t cols);

  // "dyad", "er(100,0.02)", "lattice(5x5)".
  static Topology parse(const std::string& text);
  std::string to_string() const;

  Kind kind() const { return kind_; }
  std::size_t node_count() const { return nodes_; }
  double edge_probability() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology(Kind kind, std::size_t nodes, double p, std::size_t rows,
           std::size_t cols)
      : kind_(kind), nodes_(nodes), p_(p), rows_(rows), cols_(cols) {}

  Kind kind_;
  std::size_t nodes_;
  double p_;
  std::size_t rows_;
  std::size_t cols_;
};

// Only Erdos-Renyi graphs consume random numbers.
Adjacency build_topology(const Topology& topology, Rng& rng);

std::size_t edge_count(const Adjacency& adjacency);

}  // namespace vicar
