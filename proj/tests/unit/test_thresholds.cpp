#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "oracles.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/thresholds.hpp"

using namespace sparsegf2;
using gen::random_mixtures;

TEST_CASE("F at the ends of the gamma range") {
  for (const char* spec : {"r=3", "0.9:3,0.1:24", "0.5:1,0.5:2"}) {
    const auto d = parse_rho(spec);
    for (double a : {0.3, 0.9, 1.4}) {
      CHECK(F_gamma(d, a, 0.5) == 0.0);
      CHECK(F_gamma(d, a, 0.0) == doctest::Approx((a - 1) * std::log(2.0)));
    }
  }
  // against a direct high-precision evaluation
  PrecisionScope scope(200);
  const BigReal g("0.1"), a("0.9");
  const BigReal s = 1 - 2 * g;
  const BigReal ref = a * log(1 + s * s * s) - log(BigReal(2)) - g * log(g) - (1 - g) * log(1 - g);
  CHECK(F_gamma(WeightDist::point_mass(3), 0.9, 0.1) == doctest::Approx(to_double(ref)).epsilon(1e-13));
}

TEST_CASE("F(alpha) examples") {
  const auto r3 = WeightDist::point_mass(3);
  for (double a : {0.2, 0.5, 0.8, 0.889}) CHECK(std::abs(F_of_alpha(r3, a).value) <= 1e-9);
  for (const char* spec : {"r=1", "r=3", "0.9:3,0.1:24", "0.3:2,0.7:5"})
    CHECK(F_of_alpha(parse_rho(spec), 2.0).value >= std::log(2.0) - 1e-12);
  for (double a : {0.01, 0.1, 0.5}) CHECK(F_of_alpha(WeightDist::point_mass(1), a).value > 0);
  const auto w = F_of_alpha(r3, 0.95);
  CHECK(w.value > 0);
  CHECK(w.gamma0 < 0.5);
  const double s = std::pow(1 - 2 * w.gamma0, 3);
  CHECK(w.beta0 == doctest::Approx(s / (1 + s)));
}

TEST_CASE("alpha star") {
  CHECK(alpha_star(WeightDist::point_mass(1)).value == 0.0);
  CHECK(alpha_star(WeightDist::point_mass(2)).value == doctest::Approx(0.5).epsilon(1e-9));
  const auto a3 = alpha_star(WeightDist::point_mass(3));
  CHECK(std::abs(a3.value - 0.889493) <= 5e-6);
  REQUIRE(a3.stationary_route);
  REQUIRE(a3.lambda_route);
  CHECK(std::abs(*a3.stationary_route - a3.value) <= 1e-6);
  CHECK(std::abs(*a3.lambda_route - a3.value) <= 1e-6);
  CHECK(std::abs(alpha_star(WeightDist::point_mass(8)).value - 0.999510) <= 5e-6);
  CHECK(alpha_star(parse_rho("0.5:1,0.5:3")).value == 0.0);
  // more weight on larger rows can only raise the threshold
  CHECK(alpha_star(WeightDist::point_mass(4)).value >= alpha_star(WeightDist::point_mass(3)).value);
  for (const auto& d : random_mixtures(6, 3)) {
    const double a = alpha_star(d).value;
    CHECK(a >= 0.5);
    CHECK(a < 1);
  }
}

TEST_CASE("F is zero up to alpha star, positive after, and nondecreasing") {
  for (const auto& d : random_mixtures(20, 11)) {
    const double astar = alpha_star(d).value;
    double prev = -1;
    for (double a = 0.05; a <= 1.5; a += 0.05) {
      const double f = F_of_alpha(d, a).value;
      if (a < astar - 1e-6) REQUIRE(std::abs(f) <= 1e-9);
      if (a > astar + 1e-6) REQUIRE(f > 0);
      REQUIRE(f >= prev - 1e-12);
      prev = f;
    }
    // no jump at the threshold
    REQUIRE(F_of_alpha(d, astar + 1e-4).value < 1e-3);
  }
}

TEST_CASE("rate R for single balls matches the closed form") {
  const auto one = WeightDist::point_mass(1);
  const double lt = std::tanh(1.0);
  const double closed = lt * (1 - std::log(lt)) - std::log(std::cosh(1.0));
  CHECK(R_of_alpha(one, lt) == doctest::Approx(closed).epsilon(1e-9));
  CHECK(ehrenfest_rate(lt) == doctest::Approx(closed).epsilon(1e-12));
  CHECK(R_of_alpha(one, 2.0) == doctest::Approx(-oracle::ehrenfest_closed(2.0)).epsilon(1e-8));
  Xoshiro256 rng(5);
  for (int t = 0; t < 20; ++t) {
    const double p = 0.05 + 0.9 * rng.uniform01();
    const WeightDist d({{1, Rational(static_cast<long>(p * 1000), 1000)},
                        {2 + static_cast<int>(rng.below(5)), 1 - Rational(static_cast<long>(p * 1000), 1000)}});
    CHECK(R_of_alpha(d, 1.0) <= R_of_alpha(d, 2.0) + 1e-12);
  }
}

TEST_CASE("rate R at weight 3 tracks the exact all-even sums") {
  const auto r3 = WeightDist::point_mass(3);
  const double slope = -R_of_alpha(r3, 1.0);
  // 2^-n sum C(n,j) (1-2j/n)^(3n), evaluated in logs; all terms are nonnegative since m is even
  const int n = 4000;
  double best = -1e300, acc = 0;
  std::vector<double> terms;
  for (int j = 0; j <= n; ++j) {
    const double s = std::abs(1 - 2.0 * j / n);
    if (s == 0) continue;
    terms.push_back(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) + 3.0 * n * std::log(s) -
                    n * std::log(2.0));
    best = std::max(best, terms.back());
  }
  for (double t : terms) acc += std::exp(t - best);
  CHECK(std::abs((best + std::log(acc)) / n - slope) <= 1e-2);
}

TEST_CASE("h and psi for fixed weight 3") {
  const auto r3 = WeightDist::point_mass(3);
  const auto v = h_psi(r3, 0.883414);
  CHECK(std::abs(v.psi) <= 5e-6);
  const double xs = x_star_iteration(3).x_star;
  CHECK(std::abs(h_psi(r3, xs).h - 0.917935) <= 5e-6);
  for (double x : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(h_psi(r3, x).h == doctest::Approx(oracle::h_fixed(3, x)).epsilon(1e-12));
    CHECK(h_psi(r3, x).psi == doctest::Approx(oracle::psi_fixed(3, x)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(h_psi(r3, 1.0), InvalidParam);
  CHECK_THROWS_AS(h_psi(r3, 0.0), InvalidParam);
}

TEST_CASE("psi slope has the sign of minus the h slope") {
  for (const auto& d : random_mixtures(20, 21))
    for (int i = 1; i < 1000; ++i) {
      const auto v = h_psi(d, i / 1000.0);
      if (std::abs(v.dh) < 1e-9 || std::abs(v.dpsi) < 1e-12) continue;
      REQUIRE((v.dpsi > 0) == (v.dh < 0));
    }
}

TEST_CASE("minimum of h") {
  const auto s3 = alpha_sharp(WeightDist::point_mass(3));
  CHECK(std::abs(s3.value - 0.818469) <= 5e-6);
  REQUIRE(s3.minimizers.size() == 1);
  CHECK(std::abs(s3.minimizers[0] - 0.715332) <= 5e-6);
  const auto [xm, hm] = oracle::h_min_fixed(3);
  CHECK(s3.value == doctest::Approx(hm).epsilon(1e-9));
  CHECK(s3.minimizers[0] == doctest::Approx(xm).epsilon(1e-5));
  CHECK(std::abs(alpha_sharp(parse_rho("0.9:3,0.1:24")).value - 0.908654) <= 5e-5);
  const double s12 = alpha_sharp(WeightDist::point_mass(12)).value;
  CHECK(s12 == doctest::Approx(oracle::h_min_fixed(12).second).epsilon(1e-9));
  CHECK(s12 < alpha_sharp(WeightDist::point_mass(8)).value);
  CHECK(alpha_sharp(WeightDist::point_mass(2)).value == doctest::Approx(0.5));
  CHECK(alpha_sharp(parse_rho("0.5:1,0.5:3")).value == 0.0);
}

TEST_CASE("g* examples and jumps") {
  const auto r3 = WeightDist::point_mass(3);
  CHECK(g_star(r3, 0.5) == 0.0);
  CHECK(g_star(r3, 0.818) == 0.0);
  CHECK(std::abs(g_star(r3, 0.917935) - 0.883414) <= 5e-6);

  const auto fig1 = parse_rho("0.9:3,0.1:24");
  CurveAnalysis c(fig1);
  CHECK(std::abs(c.g_star(0.938536 - 1e-4) - 0.835696) <= 5e-3);

  const auto d3 = discontinuities(r3);
  REQUIRE(d3.size() == 1);
  CHECK(std::abs(d3[0].alpha - 0.818469) <= 5e-6);
  const auto d1 = discontinuities(fig1);
  REQUIRE(d1.size() == 2);
  CHECK(std::abs(d1[0].alpha - 0.908654) <= 5e-5);
  CHECK(std::abs(d1[1].alpha - 0.938536) <= 5e-5);
  CHECK(std::abs(c.g_star(d1[1].alpha) - 0.964919) <= 5e-5);
  const auto d2 = discontinuities(parse_rho("0.9183:3,0.04:19,0.0417:41"));
  REQUIRE(d2.size() == 2);
  CHECK(std::abs(d2[0].alpha - 0.890061) <= 5e-5);
  CHECK(std::abs(d2[1].alpha - 0.991044) <= 5e-5);
}

TEST_CASE("g* is monotone, right-continuous at jumps, inverts h and tends to 1") {
  for (const auto& d : random_mixtures(20, 31)) {
    CurveAnalysis c(d);
    double prev = 0;
    for (double a = 0.3; a <= 3.0; a += 0.01) {
      const double g = c.g_star(a);
      REQUIRE(g >= prev - 1e-12);
      prev = g;
      if (a >= c.alpha_sharp() && g > 0 && g < 1 - 1e-12) {
        // g* itself is rounded; near x=1 h is steep enough that this dominates
        const auto v = h_psi(d, g);
        REQUIRE(std::abs(v.h - a) <= 1e-9 + 4 * std::abs(v.dh) * 2.2e-16);
      }
    }
    CHECK(c.g_star(20.0) > 0.999);
    for (const auto& j : c.discontinuities()) {
      // h is flat at the local minimum, so the crossing is only good to ~sqrt(eps)
      CHECK(c.g_star(j.alpha) == doctest::Approx(j.g_right).epsilon(1e-6));
      CHECK(j.g_right > j.g_left);
    }
    if (!c.discontinuities().empty()) CHECK(c.discontinuities().front().alpha == doctest::Approx(c.alpha_sharp()));
  }
}

TEST_CASE("alpha bar") {
  const auto b3 = alpha_bar(WeightDist::point_mass(3));
  REQUIRE(b3);
  CHECK(std::abs(b3->value - 0.917935) <= 5e-6);
  CHECK(b3->transversal);
  CHECK_FALSE(b3->via_jump);
  const auto b1 = alpha_bar(parse_rho("0.9:3,0.1:24"));
  REQUIRE(b1);
  CHECK(std::abs(b1->value - 0.991613) <= 5e-5);
  CHECK(std::abs(b1->x_star - 0.987817) <= 5e-5);
  CurveAnalysis c2(parse_rho("0.9183:3,0.04:19,0.0417:41"));
  REQUIRE(c2.alpha_bar());
  CHECK(std::abs(c2.alpha_bar()->value - 0.990686) <= 5e-5);
  CHECK(c2.sign_pattern() == "+,-,+,-");
  CHECK_FALSE(alpha_bar(WeightDist::point_mass(2)));
  CHECK_FALSE(alpha_bar(parse_rho("0.5:2,0.5:3")));

  for (const auto& d : random_mixtures(20, 41)) {
    const auto b = alpha_bar(d);
    REQUIRE(b);
    const double a = alpha_star(d).value;
    REQUIRE(a <= b->value + 1e-9);
    REQUIRE(b->value <= 1 + 1e-12);
    REQUIRE(alpha_sharp(d).value <= b->value + 1e-12);
  }
}

TEST_CASE("sandwich iteration for the fixed-weight root") {
  const auto it3 = x_star_iteration(3);
  CHECK(std::abs(it3.x_star - 0.883414) <= 1e-6);
  CHECK(it3.monotone);
  CHECK(it3.gap < 1e-14);
  CHECK(it3.x_star == doctest::Approx(oracle::psi_root_fixed(3)).epsilon(1e-12));
  for (std::size_t i = 1; i < it3.lower.size(); ++i) {
    REQUIRE(it3.lower[i] >= it3.lower[i - 1]);
    REQUIRE(it3.upper[i] <= it3.upper[i - 1]);
  }

  const int r = 5;
  const double x5 = x_star_iteration(r).x_star;
  CHECK(1 - std::exp(-r * (r - 2.0) / (2 * (r - 1))) < x5);
  CHECK(x5 < 1 - std::exp(-double(r)));
  for (int rr = 3; rr <= 8; ++rr) {
    const double x = x_star_iteration(rr).x_star;
    CHECK(x > (rr - 2.0) / (rr - 1.0));
    CHECK(x < 1);
    const auto roots = CurveAnalysis(WeightDist::point_mass(rr)).psi_roots();
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(x).epsilon(1e-9));
  }

  PrecisionScope scope(256);
  const BigReal x12 = x_star_big(12);
  const BigReal e = exp(BigReal(-12));
  const BigReal approx = 1 - e - 144 * e * e;
  const double err = std::abs(to_double(BigReal(x12 - approx)));
  const double scale = std::exp(-36.0) * std::pow(12.0, 4);
  CHECK(err > scale / 100);
  CHECK(err < scale * 100);
  CHECK_THROWS_AS(x_star_iteration(2), InvalidParam);
  CHECK_THROWS_AS(x_star_iteration(3, 3), NoConvergence);
}

TEST_CASE("core limit quantities") {
  const auto r3 = WeightDist::point_mass(3);
  const auto low = core_theory(r3, 0.8);
  CHECK(low.g_star == 0.0);
  CHECK(low.core_row_frac == 0.0);
  CHECK(low.occupied_col_frac == 0.0);
  CHECK(low.incidence_frac == 0.0);

  const auto t = core_theory(r3, 0.95);
  const double g = g_star(r3, 0.95);
  CHECK(t.g_star == doctest::Approx(g));
  CHECK(t.core_row_frac == doctest::Approx(0.95 * g * g * g).epsilon(1e-12));
  CHECK(t.nu == doctest::Approx(0.95 * 3 * g * g).epsilon(1e-12));
  CHECK(t.occupied_col_frac == doctest::Approx(1 - std::exp(-t.nu) * (1 + t.nu)).epsilon(1e-12));
  CHECK(t.aspect_sign == -1);  // 0.95 lies past alpha bar
  double mass = 0;
  for (double p : t.degree_pmf) mass += p;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

  Xoshiro256 rng(61);
  const auto dists = random_mixtures(20, 51);
  for (const auto& d : dists) {
    const double a = 0.5 + 1.5 * rng.uniform01();
    const auto th = core_theory(d, a);
    const double gs = th.g_star;
    REQUIRE(th.core_row_frac >= 0);
    REQUIRE(th.core_row_frac <= a);
    REQUIRE(th.occupied_col_frac >= 0);
    REQUIRE(th.occupied_col_frac <= 1);
    REQUIRE(th.incidence_frac == doctest::Approx(-gs * std::log1p(-gs)).epsilon(1e-10));
    const double slack = gs > 0 ? 4 * std::abs(h_psi(d, gs).dh) * 2.2e-16 : 0.0;
    REQUIRE(std::abs(th.incidence_frac - a * gs * d.pgf(gs, 1)) <= (1e-10 + slack) * std::max(1.0, a));
  }

  // three-weight law with two jumps: psi(g*) > 0 just before the second sign change, < 0 after
  CurveAnalysis c2(parse_rho("0.9183:3,0.04:19,0.0417:41"));
  CHECK(core_theory(c2, 0.9905).aspect_sign == 1);
  CHECK(core_theory(c2, 0.9912).aspect_sign == -1);
}

TEST_CASE("asymptotics of the two thresholds") {
  const auto rows = threshold_asymptotics(12);
  REQUIRE(rows.size() == 10);
  CHECK(rows.front().r == 3);
  CHECK(std::abs(to_double(rows.front().alpha_star) - 0.889493) <= 5e-6);
  CHECK(std::abs(to_double(rows.front().alpha_bar) - 0.917935) <= 5e-6);
  CHECK(std::abs(rows.back().star_scaled - 1) <= 0.15);
  CHECK(std::abs(rows.back().bar_scaled - 1) <= 0.15);
  CHECK(to_double(alpha_star_lambda_big(5)) == doctest::Approx(alpha_star_lambda(5)).epsilon(1e-12));
  CHECK(alpha_star_stationary(6) == doctest::Approx(alpha_star_lambda(6)).epsilon(1e-9));
}

TEST_CASE("threshold report") {
  const auto rep = threshold_report(WeightDist::point_mass(3));
  CHECK(rep.x_star_fixed);
  CHECK(rep.alpha_bar);
  CHECK(rep.witness_alpha == doctest::Approx(rep.alpha_star.value));
  const auto rep2 = threshold_report(WeightDist::point_mass(2), 0.7);
  CHECK_FALSE(rep2.alpha_bar);
  CHECK(rep2.witness_alpha == 0.7);
  CHECK(rep2.witness.value > 0);
}
