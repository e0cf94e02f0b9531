#include <algorithm>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/gf2.hpp"
#include "sparsegf2/rng.hpp"

using namespace sparsegf2;
using gen::random_matrix;

namespace {

BitVector bits(const std::string& s) { return BitVector::from_string(s); }

std::vector<std::uint32_t> masks(const GF2Matrix& mat) {
  std::vector<std::uint32_t> out;
  for (const auto& r : mat.rows()) out.push_back(static_cast<std::uint32_t>(r.words()[0]));
  return out;
}

}  // namespace

TEST_CASE("bit vectors") {
  auto v = BitVector::from_indices(130, {0, 64, 129, 64});
  CHECK(v.popcount() == 2);  // repeated index cancels
  CHECK(v.lowest() == 0);
  CHECK(v.indices() == std::vector<std::uint32_t>{0, 129});
  CHECK(bits("0110").to_string() == "0110");
  CHECK(BitVector(70).lowest() == 70);
  CHECK_THROWS_AS(BitVector::from_string("01x"), ParseError);
}

TEST_CASE("first dependency examples") {
  RankState a(3);
  CHECK_FALSE(a.absorb(bits("100")));
  CHECK(a.absorb(bits("100")));

  RankState b(3);
  CHECK_FALSE(b.absorb(bits("110")));
  CHECK_FALSE(b.absorb(bits("011")));
  CHECK(b.absorb(bits("101")));
  CHECK(b.corank() == 1);

  Xoshiro256 rng(5);
  const std::size_t n = 40;
  RankState c(n);
  for (std::size_t i = 0; i < n; ++i) {
    BitVector e(n);
    e.set(i);
    if (i + 1 < n) e.set(i + 1);
    REQUIRE_FALSE(c.absorb(e));
  }
  for (int t = 0; t < 20; ++t) {
    RankState copy = c;
    BitVector any(n);
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform01() < 0.5) any.set(j);
    CHECK(copy.absorb(any));
  }

  RankState z(4);
  CHECK(z.absorb(BitVector(4)));  // zero row is dependent
  CHECK(z.corank() == 1);
  CHECK_THROWS_AS(z.absorb(BitVector(5)), DimensionMismatch);
}

TEST_CASE("corank examples") {
  GF2Matrix id(3);
  for (std::string s : {"100", "010", "001"}) id.add_row(bits(s));
  CHECK(corank(id) == 0);

  GF2Matrix same(5);
  for (int i = 0; i < 4; ++i) same.add_row(bits("10110"));
  CHECK(corank(same) == 3);
  CHECK(enumerate_null_vectors(same).vectors.size() == 8);

  // 12 rows on 19 columns with rank 11
  Xoshiro256 rng(19);
  GF2Matrix indep(19);
  RankState st(19);
  while (indep.n_rows() < 11) {
    BitVector r(19);
    for (int j = 0; j < 19; ++j)
      if (rng.uniform01() < 0.3) r.set(j);
    if (!r.none() && !RankState(st).absorb(r)) {
      st.absorb(r);
      indep.add_row(r);
    }
  }
  BitVector extra = indep.row(2);
  extra ^= indep.row(7);
  indep.add_row(extra);
  CHECK(indep.n_rows() == 12);
  CHECK(corank(indep) == 1);
}

TEST_CASE("matrix invariants") {
  GF2Matrix m(4);
  CHECK_THROWS_AS(m.add_row(BitVector(4)), InvalidParam);
  CHECK_THROWS_AS(m.add_row(BitVector(3)), DimensionMismatch);
  m.add_row_indices({0, 2, 3});
  CHECK(m.row_weight(0) == 3);
  CHECK(m.total_units() == 3);
}

TEST_CASE("null vector enumeration examples") {
  GF2Matrix id(3);
  for (std::string s : {"100", "010", "001"}) id.add_row(bits(s));
  CHECK(enumerate_null_vectors(id).vectors == std::vector<std::uint32_t>{0});

  GF2Matrix two(3);
  two.add_row(bits("101"));
  two.add_row(bits("101"));
  auto ns = enumerate_null_vectors(two);
  std::sort(ns.vectors.begin(), ns.vectors.end());
  CHECK(ns.vectors == std::vector<std::uint32_t>{0, 3});
  CHECK(ns.weight_profile == std::vector<std::uint64_t>{1, 0, 1});

  Xoshiro256 rng(8);
  const auto r86 = random_matrix(6, 8, rng);
  CHECK(enumerate_null_vectors(r86).vectors.size() == (std::size_t{1} << corank(r86)));

  GF2Matrix big(3);
  for (int i = 0; i < 25; ++i) big.add_row(bits("100"));
  CHECK_THROWS_AS(enumerate_null_vectors(big), TooLarge);
}

TEST_CASE("all-ones null vector") {
  CHECK(is_one_null(GF2Matrix(5)));
  GF2Matrix one(5);
  one.add_row_indices({0, 1, 2});
  CHECK_FALSE(is_one_null(one));
  one.add_row_indices({0, 1, 2});
  CHECK(is_one_null(one));
}

TEST_CASE("fuzz: enumeration, corank and the brute-force rank agree") {
  Xoshiro256 rng(2024);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const std::size_t m = rng.below(17);
    const auto mat = random_matrix(n, m, rng, 0.1 + 0.5 * rng.uniform01());
    const auto ns = enumerate_null_vectors(mat);
    const std::size_t sigma = corank(mat);
    REQUIRE(ns.vectors.size() == (std::size_t{1} << sigma));
    REQUIRE(static_cast<int>(m) - oracle::rank_of(masks(mat)) == static_cast<int>(sigma));
    const std::uint32_t all = m == 0 ? 0U : static_cast<std::uint32_t>((std::uint64_t{1} << m) - 1);
    const bool has_all = std::find(ns.vectors.begin(), ns.vectors.end(), all) != ns.vectors.end();
    REQUIRE(has_all == is_one_null(mat));
    REQUIRE(std::accumulate(ns.weight_profile.begin(), ns.weight_profile.end(), std::uint64_t{0}) == ns.vectors.size());
  }
}

TEST_CASE("rank does not depend on row order, and corank only grows") {
  Xoshiro256 rng(77);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 5 + rng.below(60);
    const auto mat = random_matrix(n, 1 + rng.below(80), rng, 0.08);
    std::vector<std::size_t> order(mat.n_rows());
    std::iota(order.begin(), order.end(), 0);
    RankState fwd(n), shuffled(n);
    std::size_t last = 0;
    for (std::size_t i = 0; i < mat.n_rows(); ++i) {
      fwd.absorb(mat.row(i));
      REQUIRE(fwd.corank() >= last);
      last = fwd.corank();
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) shuffled.absorb(mat.row(i));
    REQUIRE(fwd.corank() == shuffled.corank());
    REQUIRE(fwd.rank() <= n);
  }
}

TEST_CASE("basis stays fully reduced") {
  Xoshiro256 rng(31);
  const auto mat = random_matrix(150, 120, rng, 0.05);
  RankState st(150);
  for (const auto& r : mat.rows()) st.absorb(r);
  const auto& basis = st.basis();
  const auto& piv = st.pivots();
  REQUIRE(basis.size() == piv.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    CHECK(basis[i].lowest() == piv[i]);
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (j != i) REQUIRE_FALSE(basis[j].test(piv[i]));
  }
}

TEST_CASE("text formats round trip") {
  Xoshiro256 rng(4);
  const auto mat = random_matrix(70, 9, rng);
  for (auto fmt : {MatrixFormat::sparse, MatrixFormat::dense}) {
    std::stringstream ss;
    write_matrix(ss, mat, fmt);
    CHECK(read_matrix(ss, fmt) == mat);
  }
  std::istringstream extra("# gf2 sparse n=4 m=2\n# a comment line\n0 1\n\n2 3\n");
  CHECK(read_matrix(extra, MatrixFormat::sparse).n_rows() == 2);
  std::istringstream bad_header("0 1\n");
  CHECK_THROWS_AS(read_matrix(bad_header, MatrixFormat::sparse), ParseError);
  std::istringstream bad_index("# gf2 sparse n=3\n0 5\n");
  CHECK_THROWS_AS(read_matrix(bad_index, MatrixFormat::sparse), ParseError);
  std::istringstream bad_count("# gf2 sparse n=3 m=2\n0 1\n");
  CHECK_THROWS_AS(read_matrix(bad_count, MatrixFormat::sparse), ParseError);
  std::istringstream ragged("0110\n011\n");
  CHECK_THROWS_AS(read_matrix(ragged, MatrixFormat::dense), ParseError);
}
