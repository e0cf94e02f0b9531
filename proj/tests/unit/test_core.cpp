#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "sparsegf2/core.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/thresholds.hpp"

using namespace sparsegf2;
using gen::random_hypergraph;

namespace {

using Edges = std::vector<std::vector<std::uint32_t>>;

void check_invariants(const Hypergraph& h, const CoreStats& s) {
  std::vector<std::size_t> deg(h.n_vertices(), 0);
  std::size_t inc = 0, rows = 0;
  for (std::size_t e = 0; e < h.n_edges(); ++e) {
    if (!s.edge_in_core[e]) continue;
    ++rows;
    inc += h.edges()[e].size();
    for (auto v : h.edges()[e]) ++deg[v];
  }
  REQUIRE(rows == s.core_rows);
  REQUIRE(inc == s.incidences);
  std::size_t occupied = 0, by_degree = 0, weighted = 0;
  for (std::size_t v = 0; v < deg.size(); ++v) {
    REQUIRE(deg[v] != 1);
    occupied += deg[v] > 0;
  }
  REQUIRE(occupied == s.occupied_cols);
  for (std::size_t d = 0; d < s.cols_by_degree.size(); ++d) {
    by_degree += s.cols_by_degree[d];
    weighted += d * s.cols_by_degree[d];
  }
  REQUIRE(by_degree == h.n_vertices());
  REQUIRE(weighted == s.incidences);
  std::size_t w_rows = 0, w_inc = 0;
  for (std::size_t w = 0; w < s.rows_by_weight.size(); ++w) {
    w_rows += s.rows_by_weight[w];
    w_inc += w * s.rows_by_weight[w];
  }
  REQUIRE(w_rows == s.core_rows);
  REQUIRE(w_inc == s.incidences);
}

}  // namespace

TEST_CASE("hypergraph construction") {
  Hypergraph h(4, {{2, 0, 1}, {3, 1}});
  CHECK(h.edges()[0] == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(h.vertex_degree()[1] == 2);
  CHECK(h.incident_edges()[1].size() == 2);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 0, 1}}), InvalidParam);
  CHECK_THROWS_AS(Hypergraph(3, {{0, 5}}), DimensionMismatch);
}

TEST_CASE("peeling examples") {
  const auto single = peel_2core(Hypergraph(4, {{1, 2, 3}}));
  CHECK(single.core_rows == 0);
  CHECK(single.occupied_cols == 0);

  const auto tri = peel_2core(Hypergraph(4, {{1, 2}, {2, 3}, {1, 3}}));
  CHECK(tri.core_rows == 3);
  CHECK(tri.occupied_cols == 3);

  const auto twin = peel_2core(Hypergraph(4, {{1, 2, 3}, {1, 2, 3}}));
  CHECK(twin.core_rows == 2);
  CHECK(twin.occupied_cols == 3);
  CHECK(twin.incidences == 6);
}

TEST_CASE("large-core event and the tall-core hypercycle implication") {
  CoreStats empty;
  CHECK_FALSE(check_E(empty, 10, 0.1));
  CHECK_FALSE(core_implies_hypercycle(empty));
  CoreStats sq;
  sq.core_rows = 3;
  sq.occupied_cols = 3;
  CHECK_FALSE(check_E(sq, 10, 0.1));
  CoreStats tall;
  tall.core_rows = 4;
  tall.occupied_cols = 3;
  CHECK(core_implies_hypercycle(tall));
  CHECK(check_E(tall, 10, 0.1));
  CHECK_FALSE(check_E(tall, 100, 0.1));
  CHECK_THROWS_AS(check_E(tall, 10, 0.0), InvalidParam);

  // an empty core means no hypercycle at all
  Xoshiro256 rng(6);
  for (int t = 0; t < 200; ++t) {
    SampleConfig cfg;
    cfg.n = 40;
    cfg.m = 20;
    cfg.seed = static_cast<std::uint64_t>(t);
    const auto mat = sample_matrix(cfg);
    const auto st = peel_2core(Hypergraph::from_matrix(mat));
    if (st.core_rows == 0) REQUIRE(corank(mat) == 0);
  }
}

TEST_CASE("dense instance above the threshold: tall core forces a null vector") {
  int tall = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    SampleConfig cfg;
    cfg.n = 2000;
    cfg.m = 1900;
    cfg.seed = s;
    const auto mat = sample_matrix(cfg);
    const auto st = peel_2core(Hypergraph::from_matrix(mat));
    if (core_implies_hypercycle(st)) {
      ++tall;
      REQUIRE(corank(mat) >= 1);
    }
  }
  CHECK(tall > 30);
}

TEST_CASE("peeling order does not change the core (1000 random hypergraphs)") {
  Xoshiro256 rng(100);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 3 + rng.below(30);
    const auto h = random_hypergraph(rng, n, rng.below(2 * n), 4);
    const auto fifo = peel_2core(h, PeelOrder::fifo);
    const auto lifo = peel_2core(h, PeelOrder::lifo);
    const auto rnd = peel_2core(h, PeelOrder::random, static_cast<std::uint64_t>(t));
    REQUIRE(fifo.edge_in_core == lifo.edge_in_core);
    REQUIRE(fifo.edge_in_core == rnd.edge_in_core);
    check_invariants(h, fifo);
  }
}

TEST_CASE("null vectors live on core rows") {
  Xoshiro256 rng(200);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 3 + rng.below(12);
    const std::size_t m = rng.below(17);
    const auto h = random_hypergraph(rng, n, m, 3);
    GF2Matrix mat(n);
    for (const auto& e : h.edges()) mat.add_row_indices(e);
    const auto st = peel_2core(h);
    for (auto a : enumerate_null_vectors(mat).vectors)
      for (std::size_t i = 0; i < m; ++i)
        if ((a >> i) & 1U) REQUIRE(st.edge_in_core[i]);
  }
}

TEST_CASE("aspect ratio never drops while peeling a tall-enough hypergraph") {
  Xoshiro256 rng(300);
  int checked = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 10 + rng.below(40);
    const auto h = random_hypergraph(rng, n, n + rng.below(n), 3);
    const auto st = peel_2core(h, PeelOrder::fifo, 0, true);
    REQUIRE(!st.trace.empty());
    if (st.trace.front().second == 0 || st.trace.front().first < st.trace.front().second) continue;
    ++checked;
    for (std::size_t i = 1; i < st.trace.size(); ++i) {
      const auto [r0, c0] = st.trace[i - 1];
      const auto [r1, c1] = st.trace[i];
      if (c1 == 0) break;
      REQUIRE(static_cast<double>(r1) / c1 >= static_cast<double>(r0) / c0 - 1e-12);
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("core size follows the limit law at moderate n") {
  const auto th = core_theory(WeightDist::point_mass(3), 0.95);
  SampleConfig cfg;
  cfg.n = 20000;
  cfg.m = 19000;
  double rows = 0, occ = 0, inc = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    cfg.seed = s;
    const auto st = peel_2core(Hypergraph::from_matrix(sample_matrix(cfg)));
    rows += st.core_rows / 5.0 / cfg.n;
    occ += st.occupied_cols / 5.0 / cfg.n;
    inc += st.incidences / 5.0 / cfg.n;
  }
  CHECK(rows == doctest::Approx(th.core_row_frac).epsilon(0.02));
  CHECK(occ == doctest::Approx(th.occupied_col_frac).epsilon(0.02));
  CHECK(inc == doctest::Approx(th.incidence_frac).epsilon(0.02));
}

TEST_CASE("core column degrees look like a Poisson law cut off below 2") {
  const auto th = core_theory(WeightDist::point_mass(3), 0.95);
  SampleConfig cfg;
  cfg.n = 20000;
  cfg.m = 19000;
  cfg.seed = 9;
  const auto st = peel_2core(Hypergraph::from_matrix(sample_matrix(cfg)));
  // pool degrees >= 7 to keep expected counts large
  double chi2 = 0;
  int bins = 0;
  double tail_obs = 0, tail_exp = 0;
  for (std::size_t d = 2; d < th.degree_pmf.size(); ++d) {
    const double obs = d < st.cols_by_degree.size() ? static_cast<double>(st.cols_by_degree[d]) : 0.0;
    const double expct = th.degree_pmf[d] * cfg.n;
    if (d >= 7) {
      tail_obs += obs;
      tail_exp += expct;
      continue;
    }
    chi2 += (obs - expct) * (obs - expct) / expct;
    ++bins;
  }
  chi2 += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
  ++bins;
  // 5 degrees of freedom; 0.999 quantile is about 20.5
  CHECK(bins == 6);
  CHECK(chi2 < 20.5);
}
