#include "sparsegf2/core.hpp"

#include <algorithm>

#include "sparsegf2/errors.hpp"
#include "sparsegf2/rng.hpp"

namespace sparsegf2 {

Hypergraph::Hypergraph(std::size_t n_vertices, std::vector<std::vector<std::uint32_t>> edges)
    : n_vertices_(n_vertices), edges_(std::move(edges)), degree_(n_vertices, 0), incident_(n_vertices) {
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto& edge = edges_[e];
    std::sort(edge.begin(), edge.end());
    if (std::adjacent_find(edge.begin(), edge.end()) != edge.end())
      throw InvalidParam("hyperedge has a repeated vertex");
    for (auto v : edge) {
      if (v >= n_vertices_) throw DimensionMismatch("vertex index out of range");
      ++degree_[v];
      incident_[v].push_back(static_cast<std::uint32_t>(e));
    }
  }
}

Hypergraph Hypergraph::from_matrix(const GF2Matrix& matrix) {
  std::vector<std::vector<std::uint32_t>> edges;
  edges.reserve(matrix.n_rows());
  for (const auto& r : matrix.rows()) edges.push_back(r.indices());
  return Hypergraph(matrix.n_cols(), std::move(edges));
}

CoreStats peel_2core(const Hypergraph& h, PeelOrder order, std::uint64_t seed, bool record_trace) {
  const auto& edges = h.edges();
  const auto& incident = h.incident_edges();
  std::vector<std::uint32_t> deg = h.vertex_degree();
  std::vector<bool> alive(edges.size(), true);

  std::size_t rows = edges.size();
  std::size_t occupied = 0;
  for (auto d : deg) occupied += d > 0;

  CoreStats st;
  if (record_trace) st.trace.emplace_back(rows, occupied);

  // Pending degree-1 vertices; entries are re-checked when taken (lazy deletion).
  std::vector<std::uint32_t> pending;
  std::size_t head = 0;
  for (std::uint32_t v = 0; v < deg.size(); ++v)
    if (deg[v] == 1) pending.push_back(v);
  Xoshiro256 rng(seed);

  auto take = [&]() -> std::uint32_t {
    switch (order) {
      case PeelOrder::fifo:
        return pending[head++];
      case PeelOrder::lifo: {
        auto v = pending.back();
        pending.pop_back();
        return v;
      }
      case PeelOrder::random: {
        auto i = static_cast<std::size_t>(rng.below(pending.size() - head)) + head;
        std::swap(pending[i], pending.back());
        auto v = pending.back();
        pending.pop_back();
        return v;
      }
    }
    return 0;
  };

  while (head < pending.size()) {
    const std::uint32_t v = take();
    if (deg[v] != 1) continue;
    std::uint32_t e = 0;
    for (auto cand : incident[v])
      if (alive[cand]) {
        e = cand;
        break;
      }
    alive[e] = false;
    --rows;
    for (auto u : edges[e]) {
      if (--deg[u] == 1) pending.push_back(u);
      if (deg[u] == 0) --occupied;
    }
    if (order == PeelOrder::fifo && head > 4096 && head * 2 > pending.size()) {
      pending.erase(pending.begin(), pending.begin() + static_cast<std::ptrdiff_t>(head));
      head = 0;
    }
    if (record_trace) st.trace.emplace_back(rows, occupied);
  }

  st.core_rows = rows;
  st.occupied_cols = occupied;
  st.edge_in_core = alive;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    const auto w = edges[e].size();
    if (st.rows_by_weight.size() <= w) st.rows_by_weight.resize(w + 1, 0);
    ++st.rows_by_weight[w];
    st.incidences += w;
  }
  for (auto d : deg) {
    if (st.cols_by_degree.size() <= d) st.cols_by_degree.resize(d + 1, 0);
    ++st.cols_by_degree[d];
  }
  return st;
}

bool check_E(const CoreStats& stats, std::size_t n, double eps) {
  if (!(eps > 0)) throw InvalidParam("eps must be positive");
  return static_cast<double>(stats.core_rows) >= eps * static_cast<double>(n) &&
         stats.core_rows > stats.occupied_cols;
}

bool core_implies_hypercycle(const CoreStats& stats) {
  return stats.occupied_cols < stats.core_rows;
}

}  // namespace sparsegf2
