#pragma once

#include <cstdint>
#include <vector>

#include "sparsegf2/gf2.hpp"

namespace sparsegf2 {

// Rows as hyperedges over the column set.
class Hypergraph {
 public:
  Hypergraph(std::size_t n_vertices, std::vector<std::vector<std::uint32_t>> edges);
  static Hypergraph from_matrix(const GF2Matrix& matrix);

  std::size_t n_vertices() const { return n_vertices_; }
  std::size_t n_edges() const { return edges_.size(); }
  const std::vector<std::vector<std::uint32_t>>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& vertex_degree() const { return degree_; }
  const std::vector<std::vector<std::uint32_t>>& incident_edges() const { return incident_; }

 private:
  std::size_t n_vertices_;
  std::vector<std::vector<std::uint32_t>> edges_;
  std::vector<std::uint32_t> degree_;
  std::vector<std::vector<std::uint32_t>> incident_;
};

struct CoreStats {
  std::size_t core_rows = 0;
  std::size_t occupied_cols = 0;  // columns with degree >= 1 inside the core
  std::size_t incidences = 0;
  std::vector<std::size_t> rows_by_weight;  // index = row weight
  std::vector<std::size_t> cols_by_degree;  // index = core degree, over all columns
  std::vector<bool> edge_in_core;
  // Optional (rows, occupied cols) after each deletion, starting with the input.
  std::vector<std::pair<std::size_t, std::size_t>> trace;
};

enum class PeelOrder { fifo, lifo, random };

// Repeatedly delete an edge containing a degree-1 vertex until none is left.
CoreStats peel_2core(const Hypergraph& h, PeelOrder order = PeelOrder::fifo,
                     std::uint64_t seed = 0, bool record_trace = false);

// Core with at least eps*n rows and more rows than occupied columns.
bool check_E(const CoreStats& stats, std::size_t n, double eps = 0.05);

// A core with more rows than occupied columns forces a null vector.
bool core_implies_hypercycle(const CoreStats& stats);

}  // namespace sparsegf2
