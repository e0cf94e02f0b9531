#include <cmath>
#include <sstream>

#include "doctest.h"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/sampler.hpp"

using namespace sparsegf2;

TEST_CASE("model names") {
  CHECK(parse_model("exact") == WeightModel::exact);
  CHECK(parse_model("binomial") == WeightModel::binomial);
  CHECK(model_name(WeightModel::binomial) == "binomial");
  CHECK_THROWS_AS(parse_model("poisson"), ParseError);
}

TEST_CASE("uniform subsets") {
  Xoshiro256 rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto s = sample_subset(7, 20, rng);
    REQUIRE(s.size() == 7);
    REQUIRE(std::is_sorted(s.begin(), s.end()));
    REQUIRE(std::adjacent_find(s.begin(), s.end()) == s.end());
    REQUIRE(s.back() < 20);
  }
}

TEST_CASE("row examples") {
  SampleConfig cfg;
  cfg.n = 3;
  Xoshiro256 rng(2);
  for (int i = 0; i < 50; ++i) REQUIRE(sample_row(cfg, rng) == std::vector<std::uint32_t>{0, 1, 2});

  cfg.n = 5;
  cfg.dist = WeightDist::point_mass(1);
  std::vector<int> freq(5, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) ++freq[sample_row(cfg, rng)[0]];
  for (int f : freq) CHECK(std::abs(f / double(draws) - 0.2) <= 0.01);

  cfg.n = 100;
  cfg.dist = WeightDist::point_mass(3);
  for (int i = 0; i < 1000; ++i) REQUIRE(sample_row(cfg, rng).size() == 3);
}

TEST_CASE("binomial-model rows are never empty and have weight parity of W") {
  SampleConfig cfg;
  cfg.n = 4;
  cfg.dist = WeightDist::point_mass(2);
  cfg.model = WeightModel::binomial;
  Xoshiro256 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const auto r = sample_row(cfg, rng);
    REQUIRE(r.size() == 2);  // two balls in different urns; empty rows are redrawn
  }
  cfg.dist = WeightDist::point_mass(3);
  for (int i = 0; i < 2000; ++i) {
    const auto r = sample_row(cfg, rng);
    REQUIRE((r.size() == 1 || r.size() == 3));
  }
}

TEST_CASE("matrix examples") {
  SampleConfig cfg;
  cfg.n = 4;
  cfg.m = 0;
  CHECK(sample_matrix(cfg).n_rows() == 0);

  cfg.n = 10;
  cfg.m = 10;
  cfg.seed = 42;
  CHECK(sample_matrix(cfg) == sample_matrix(cfg));
  std::ostringstream a, b;
  write_matrix(a, sample_matrix(cfg), MatrixFormat::sparse);
  write_matrix(b, sample_matrix(cfg), MatrixFormat::sparse);
  CHECK(a.str() == b.str());
  SampleConfig other = cfg;
  other.seed = 43;
  CHECK_FALSE(sample_matrix(cfg) == sample_matrix(other));

  cfg.n = 200;
  cfg.m = 100;
  CHECK(sample_matrix(cfg).total_units() == 300);

  const auto rows = sample_rows(cfg);
  const auto mat = sample_matrix(cfg);
  for (std::size_t i = 0; i < rows.size(); ++i) REQUIRE(mat.row(i).indices() == rows[i]);
}

TEST_CASE("column incidence is uniform (chi-square)") {
  SampleConfig cfg;
  cfg.n = 50;
  cfg.m = 100000;
  cfg.seed = 5;
  std::vector<double> counts(50, 0);
  for (const auto& r : sample_rows(cfg))
    for (auto c : r) ++counts[c];
  const double expected = 3.0 * cfg.m / cfg.n;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 49 degrees of freedom; 0.999 quantile is about 85.4
  CHECK(chi2 < 85.4);
}

TEST_CASE("first dependency time") {
  SampleConfig cfg;
  cfg.n = 1;
  cfg.dist = parse_rho("0.5:1,0.5:4");
  for (std::uint64_t s = 0; s < 20; ++s) {
    cfg.seed = s;
    REQUIRE(run_Tn(cfg) == 2);
  }
  cfg.n = 60;
  cfg.dist = WeightDist::point_mass(3);
  for (std::uint64_t s = 0; s < 50; ++s) {
    cfg.seed = s;
    const long t = run_Tn(cfg);
    REQUIRE(t >= 2);
    REQUIRE(t <= 61);
    REQUIRE(run_Tn(cfg, 10) == std::min(t, 11L));
  }
}

TEST_CASE("weight-1 rows: first repeat tail near exp(-z^2/2)") {
  SampleConfig cfg;
  cfg.n = 10000;
  cfg.dist = WeightDist::point_mass(1);
  const int trials = 10000;
  int survive = 0;
  for (int t = 0; t < trials; ++t) {
    cfg.seed = trial_seed(7, static_cast<std::uint64_t>(t));
    survive += run_Tn(cfg) > 100;  // z = 1: T_n > sqrt(n)
  }
  CHECK(std::abs(survive / double(trials) - std::exp(-0.5)) <= 0.02);
}
