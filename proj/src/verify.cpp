#include "sparsegf2/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "sparsegf2/errors.hpp"
#include "sparsegf2/exact.hpp"
#include "sparsegf2/gf2.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/thresholds.hpp"

namespace sparsegf2 {

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  std::size_t f = 0;
  for (const auto& c : checks) f += !c.pass;
  return f;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Check near(const std::string& name, double expected, double got, double tol) {
  Check c;
  c.name = name;
  c.expected = fmt(expected);
  c.got = fmt(got);
  c.abs_err = std::abs(expected - got);
  c.tol = tol;
  c.pass = c.abs_err <= tol;
  return c;
}

Check same(const std::string& name, const std::string& expected, const std::string& got) {
  Check c;
  c.name = name;
  c.expected = expected;
  c.got = got;
  c.pass = expected == got;
  return c;
}

// Published threshold values for fixed weight r = 1..8.
struct TableRow {
  int r;
  double sharp, star, bar;
};
constexpr TableRow kTable[] = {
    {1, 0.0, 0.0, NAN},           {2, 0.5, 0.5, NAN},
    {3, 0.818469, 0.889493, 0.917935}, {4, 0.772280, 0.967147, 0.976770},
    {5, 0.701780, 0.989162, 0.992438}, {6, 0.637081, 0.996228, 0.997380},
    {7, 0.581775, 0.998650, 0.999064}, {8, 0.534997, 0.999510, 0.999660},
};

void suite_table1(VerifyReport& rep) {
  constexpr double tol = 5e-6;
  for (const auto& row : kTable) {
    const auto dist = WeightDist::point_mass(row.r);
    CurveAnalysis curves(dist);
    const std::string r = std::to_string(row.r);
    rep.checks.push_back(near("alpha_sharp r=" + r, row.sharp, curves.alpha_sharp(), tol));
    rep.checks.push_back(near("alpha_star r=" + r, row.star, alpha_star(dist).value, tol));
    if (!std::isnan(row.bar)) {
      auto bar = curves.alpha_bar();
      rep.checks.push_back(near("alpha_bar r=" + r, row.bar, bar ? bar->value : NAN, tol));
    }
  }
}

void suite_fig1(VerifyReport& rep) {
  constexpr double tol = 5e-5;
  CurveAnalysis c(parse_rho("0.9:3,0.1:24"));
  rep.checks.push_back(near("alpha_sharp", 0.908654, c.alpha_sharp(), tol));
  const auto& d = c.discontinuities();
  rep.checks.push_back(same("jump count", "2", std::to_string(d.size())));
  if (d.size() == 2) {
    rep.checks.push_back(near("first jump g_left", 0.0, d[0].g_left, tol));
    rep.checks.push_back(near("first jump g_right", 0.719682, d[0].g_right, tol));
    rep.checks.push_back(near("second jump alpha", 0.938536, d[1].alpha, tol));
    rep.checks.push_back(near("second jump g_left", 0.835696, d[1].g_left, tol));
    rep.checks.push_back(near("second jump g_right", 0.964919, d[1].g_right, tol));
  }
  auto bar = c.alpha_bar();
  rep.checks.push_back(near("x_star", 0.987817, bar ? bar->x_star : NAN, tol));
  rep.checks.push_back(near("alpha_bar", 0.991613, bar ? bar->value : NAN, tol));
}

void suite_fig2(VerifyReport& rep) {
  constexpr double tol = 5e-5;
  CurveAnalysis c(parse_rho("0.9183:3,0.04:19,0.0417:41"));
  rep.checks.push_back(near("alpha_sharp", 0.890061, c.alpha_sharp(), tol));
  const auto& d = c.discontinuities();
  rep.checks.push_back(same("jump count", "2", std::to_string(d.size())));
  if (d.size() == 2) {
    rep.checks.push_back(near("first jump g_right", 0.720793, d[0].g_right, tol));
    rep.checks.push_back(near("second jump alpha", 0.991044, d[1].alpha, tol));
    rep.checks.push_back(near("second jump g_left", 0.929269, d[1].g_left, tol));
    rep.checks.push_back(near("second jump g_right", 0.973325, d[1].g_right, tol));
  }
  auto bar = c.alpha_bar();
  rep.checks.push_back(near("alpha_bar", 0.990686, bar ? bar->value : NAN, tol));
  rep.checks.push_back(near("x_star", 0.928538, bar ? bar->x_star : NAN, tol));
  rep.checks.push_back(same("sign pattern of psi(g*)", "+,-,+,-", c.sign_pattern()));
  double second_crossing = NAN;
  int crossings = 0;
  for (const auto& e : c.sign_events())
    if (!e.at_jump && e.sign < 0 && ++crossings == 2) second_crossing = e.alpha;
  rep.checks.push_back(near("second negative crossing", 0.991185, second_crossing, tol));
}

void suite_fig8(VerifyReport& rep) {
  constexpr double tol = 5e-5;
  CurveAnalysis c(parse_rho("0.9:3,0.1:38"));
  const double roots[] = {0.901174, 0.937414, 0.997979};
  const auto& got = c.psi_roots();
  rep.checks.push_back(same("psi root count", "3", std::to_string(got.size())));
  for (std::size_t i = 0; i < 3 && i < got.size(); ++i)
    rep.checks.push_back(near("psi root " + std::to_string(i + 1), roots[i], got[i], tol));
  rep.checks.push_back(near("alpha_sharp", 0.872923, c.alpha_sharp(), tol));
  rep.checks.push_back(near("g*(alpha_sharp)", 0.988192, c.g_star(c.alpha_sharp()), tol));
  auto bar = c.alpha_bar();
  rep.checks.push_back(near("alpha_bar", 0.998263, bar ? bar->value : NAN, tol));
  const auto it = x_star_iteration(3);
  rep.checks.push_back(near("x*_3 by sandwich iteration", 0.883414, it.x_star, 1e-6));
  rep.checks.push_back(same("sandwich a_n increasing, b_n decreasing", "true", it.monotone ? "true" : "false"));
}

// Every m-tuple of weight-w rows over n columns; fraction summing to zero.
Rational brute_prob_A(int n, int m, int w) {
  std::vector<std::uint64_t> rows;
  for (std::uint64_t v = 0; v < (1ULL << n); ++v)
    if (__builtin_popcountll(v) == w) rows.push_back(v);
  std::uint64_t hits = 0, total = 0;
  std::function<void(int, std::uint64_t)> rec = [&](int depth, std::uint64_t acc) {
    if (depth == m) {
      ++total;
      hits += acc == 0;
      return;
    }
    for (auto v : rows) rec(depth + 1, acc ^ v);
  };
  rec(0, 0);
  return Rational(BigInt(hits), BigInt(total));
}

// Mean of 2^corank over all m-tuples of weight-w rows.
Rational brute_mean_null_count(int n, int m, int w) {
  std::vector<std::vector<std::uint32_t>> rows;
  for (std::uint32_t v = 0; v < (1U << n); ++v)
    if (__builtin_popcount(v) == w) {
      std::vector<std::uint32_t> idx;
      for (int i = 0; i < n; ++i)
        if ((v >> i) & 1U) idx.push_back(static_cast<std::uint32_t>(i));
      rows.push_back(idx);
    }
  BigInt sum(0);
  std::uint64_t total = 0;
  std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
  for (;;) {
    GF2Matrix mat(static_cast<std::size_t>(n));
    for (auto p : pick) mat.add_row_indices(rows[p]);
    sum += BigInt(1) << corank(mat);
    ++total;
    int i = 0;
    while (i < m && ++pick[i] == rows.size()) pick[i++] = 0;
    if (i == m) break;
  }
  return Rational(sum, BigInt(total));
}

// Sum over all 2^(k n) outcome paths.
Rational brute_parity(const ParitySpec& spec, long n) {
  const std::size_t cells = std::size_t{1} << spec.k;
  Rational total(0);
  std::function<void(long, std::vector<int>&, Rational)> rec = [&](long step, std::vector<int>& counts, Rational p) {
    if (p == 0) return;
    if (step == n) {
      for (int i = 0; i < spec.k; ++i)
        if (counts[i] % spec.r != spec.targets[i]) return;
      total += p;
      return;
    }
    for (std::size_t g = 0; g < cells; ++g) {
      for (int i = 0; i < spec.k; ++i) counts[i] += (g >> i) & 1U;
      rec(step + 1, counts, p * spec.cell_probs_exact[g]);
      for (int i = 0; i < spec.k; ++i) counts[i] -= (g >> i) & 1U;
    }
  };
  std::vector<int> counts(static_cast<std::size_t>(spec.k), 0);
  rec(0, counts, Rational(1));
  return total;
}

void suite_oracles(VerifyReport& rep) {
  int cases = 0, bad = 0;
  for (int w : {2, 3})
    for (int n = w; n <= 6; ++n)
      for (int m = 0; m <= 4; ++m) {
        ++cases;
        const auto law = exact_model_law(WeightDist::point_mass(w), n);
        if (prob_A_exact(n, m, law) != brute_prob_A(n, m, w)) ++bad;
      }
  rep.checks.push_back(same("prob_A exact = row-tuple enumeration (" + std::to_string(cases) + " cases)", "0 mismatches",
                            std::to_string(bad) + " mismatches"));

  bad = 0;
  for (int m = 0; m <= 3; ++m)
    if (expected_null_count_exact(4, m, WeightDist::point_mass(2), WeightModel::exact).total !=
        brute_mean_null_count(4, m, 2))
      ++bad;
  rep.checks.push_back(same("E[N] exact = mean 2^corank over all 6^m matrices (n=4, m<=3)", "0 mismatches",
                            std::to_string(bad) + " mismatches"));

  bad = 0;
  cases = 0;
  const Rational probs[] = {Rational(1, 7), Rational(2, 7), Rational(3, 7), Rational(1, 7)};
  for (int k = 1; k <= 2; ++k)
    for (int r = 2; r <= 3; ++r)
      for (long n = 0; n <= 4; ++n) {
        ParitySpec spec;
        spec.k = k;
        spec.r = r;
        const std::size_t cells = std::size_t{1} << k;
        Rational norm(0);
        for (std::size_t g = 0; g < cells; ++g) norm += probs[g];
        for (std::size_t g = 0; g < cells; ++g) {
          spec.cell_probs_exact.push_back(probs[g] / norm);
          spec.cell_probs.push_back(to_double(spec.cell_probs_exact.back()));
        }
        // every target vector
        const int combos = k == 1 ? r : r * r;
        for (int c = 0; c < combos; ++c) {
          spec.targets = k == 1 ? std::vector<int>{c} : std::vector<int>{c % r, c / r};
          ++cases;
          const Rational want = brute_parity(spec, n);
          if (multinomial_parity_exact(spec, n) != want) ++bad;
          if (std::abs(multinomial_parity(spec, n) - to_double(want)) > 1e-12) ++bad;
        }
      }
  rep.checks.push_back(same("parity formula = path enumeration (" + std::to_string(cases) + " cases)", "0 mismatches",
                            std::to_string(bad) + " mismatches"));

  bad = 0;
  for (const char* spec : {"r=1", "r=2", "r=3", "0.5:1,0.25:2,0.25:3"})
    for (int n = 1; n <= 6; ++n)
      for (int m = 0; m <= 4; ++m) {
        const auto d = parse_rho(spec);
        if (pi_multinomial_exact(n, m, d) != prob_A_exact(n, m, binomial_model_law(d, n))) ++bad;
      }
  rep.checks.push_back(same("ball-and-urn formula = general formula with odd-urn law", "0 mismatches",
                            std::to_string(bad) + " mismatches"));
}

void suite_ehrenfest(VerifyReport& rep) {
  const long n = 4000;
  const auto p = pi_multinomial(n, 2 * n, WeightDist::point_mass(1));
  double rate;
  {
    PrecisionScope scope(p.bits_used);
    rate = to_double(BigReal(log(p.value))) / static_cast<double>(n);
  }
  rep.checks.push_back(near("(1/n) log pi_n(2n), n=4000", -ehrenfest_rate(2.0), rate, 1e-2));
  double worst = 0;
  for (long nn = 1; nn <= 8; ++nn)
    for (long m = 0; m <= 10; ++m)
      for (double mu : {0.5, 1.0, 2.0}) {
        const auto pc = poissonization_check(nn, m, mu);
        worst = std::max(worst, std::abs(to_double(BigReal(pc.lhs - pc.rhs))));
      }
  rep.checks.push_back(near("Poissonization identity, n<=8 (max |lhs-rhs|)", 0.0, worst, 1e-12));
}

void suite_asymptotics(VerifyReport& rep) {
  const auto rows = threshold_asymptotics(12);
  rep.checks.push_back(near("r=3 alpha_star (BigReal)", 0.889493, to_double(rows.front().alpha_star), 5e-6));
  rep.checks.push_back(near("r=3 alpha_bar (BigReal)", 0.917935, to_double(rows.front().alpha_bar), 5e-6));
  rep.checks.push_back(near("r=12 (1-alpha_star) e^r log 2", 1.0, rows.back().star_scaled, 0.15));
  rep.checks.push_back(near("r=12 (1-alpha_bar) e^r", 1.0, rows.back().bar_scaled, 0.15));
}

const std::map<std::string, std::function<void(VerifyReport&)>>& suites() {
  static const std::map<std::string, std::function<void(VerifyReport&)>> s = {
      {"table1", suite_table1}, {"fig1", suite_fig1},           {"fig2", suite_fig2},
      {"fig8", suite_fig8},     {"oracles", suite_oracles},     {"ehrenfest", suite_ehrenfest},
      {"asymptotics", suite_asymptotics}};
  return s;
}

}  // namespace

std::vector<std::string> verify_suites() {
  return {"table1", "fig1", "fig2", "fig8", "oracles", "ehrenfest", "asymptotics", "all"};
}

VerifyReport run_verify(const std::string& suite) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.suite = suite;
  if (suite == "all") {
    for (const auto& name : verify_suites()) {
      if (name == "all") continue;
      VerifyReport sub;
      suites().at(name)(sub);
      for (auto& c : sub.checks) {
        c.name = name + ": " + c.name;
        rep.checks.push_back(std::move(c));
      }
    }
  } else {
    auto it = suites().find(suite);
    if (it == suites().end()) throw InvalidParam("unknown verify suite '" + suite + "'");
    it->second(rep);
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace sparsegf2
