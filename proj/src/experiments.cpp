#include "sparsegf2/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "sparsegf2/core.hpp"
#include "sparsegf2/errors.hpp"
#include "sparsegf2/exact.hpp"
#include "sparsegf2/gf2.hpp"

namespace sparsegf2 {

Interval proportion_ci(double p, long trials) {
  const double half = 1.96 * std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(std::max(1L, trials)));
  return {p - half, p + half};
}

void parallel_trials(long trials, int threads, const std::function<void(long)>& fn) {
  int workers = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = static_cast<int>(std::min<long>(workers, std::max(1L, trials)));
  if (workers <= 1) {
    for (long t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long t = next++; t < trials && !failed; t = next++) {
        try {
          fn(t);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t cell_trial_seed(std::uint64_t seed, std::size_t cell, long trial) {
  std::uint64_t s = seed + 0x632be59bd9b4e019ULL * cell;
  return trial_seed(splitmix64(s), static_cast<std::uint64_t>(trial));
}

namespace {

void require_trials(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InvalidParam("trials must be >= 1");
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

double rel_err(double measured, double theory) {
  return theory != 0 ? std::abs(measured - theory) / std::abs(theory) : std::abs(measured);
}

nlohmann::json interval_json(const Interval& i) { return {i.lo, i.hi}; }

}  // namespace

TnWindowSummary exp_Tn_window(const ExperimentConfig& cfg) {
  require_trials(cfg);
  if (cfg.dist.min_weight() < 3) throw InvalidParam("the T_n window needs minimum weight >= 3");
  TnWindowSummary out;
  out.alpha_star = alpha_star(cfg.dist).value;
  auto bar = alpha_bar(cfg.dist);
  if (!bar) throw NoConvergence("alpha_bar undefined");
  out.alpha_bar = bar->value;
  out.window_lo = out.alpha_star - cfg.eps;
  out.window_hi = out.alpha_bar + cfg.eps;
  for (std::size_t c = 0; c < cfg.n_list.size(); ++c) {
    TnCell cell;
    cell.n = cfg.n_list[c];
    cell.T.assign(static_cast<std::size_t>(cfg.trials), 0);
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(cfg.trials));
    parallel_trials(cfg.trials, cfg.threads, [&](long t) {
      SampleConfig sc{static_cast<int>(cell.n), 0, cfg.dist, cfg.model, cell_trial_seed(cfg.seed, c, t)};
      seeds[t] = sc.seed;
      cell.T[t] = run_Tn(sc);
    });
    long inside = 0;
    double sum = 0;
    for (long T : cell.T) {
      const double ratio = static_cast<double>(T) / static_cast<double>(cell.n);
      sum += ratio;
      inside += ratio >= out.window_lo && ratio <= out.window_hi;
      if (T > cell.n + 1) cell.all_at_most_n_plus_1 = false;
    }
    cell.mean_ratio = sum / static_cast<double>(cfg.trials);
    cell.frac_in_window = static_cast<double>(inside) / static_cast<double>(cfg.trials);
    cell.ci = proportion_ci(cell.frac_in_window, cfg.trials);
    out.seeds.insert(out.seeds.end(), seeds.begin(), seeds.end());
    out.cells.push_back(std::move(cell));
  }
  return out;
}

CoreSummary exp_core_vs_theory(const ExperimentConfig& cfg) {
  require_trials(cfg);
  CoreSummary out;
  CurveAnalysis curves(cfg.dist);
  std::size_t c = 0;
  for (double alpha : cfg.alpha_list) {
    const CoreTheory theory = core_theory(curves, alpha);
    for (long n : cfg.n_list) {
      std::vector<CoreTrial> trials(static_cast<std::size_t>(cfg.trials));
      std::vector<std::vector<std::size_t>> degree(static_cast<std::size_t>(cfg.trials));
      const long m = static_cast<long>(std::floor(alpha * static_cast<double>(n)));
      parallel_trials(cfg.trials, cfg.threads, [&](long t) {
        SampleConfig sc{static_cast<int>(n), m, cfg.dist, cfg.model, cell_trial_seed(cfg.seed, c, t)};
        auto rows = sample_rows(sc);
        CoreTrial rec;
        rec.n = n;
        rec.alpha = alpha;
        rec.seed = sc.seed;
        Hypergraph h(static_cast<std::size_t>(n), rows);
        const CoreStats st = peel_2core(h);
        rec.rows = st.core_rows;
        rec.occupied = st.occupied_cols;
        rec.incidences = st.incidences;
        rec.event_E = check_E(st, static_cast<std::size_t>(n), cfg.core_eps);
        if (n <= cfg.rank_check_max_n) {
          RankState rs(static_cast<std::size_t>(n));
          for (const auto& r : rows) rs.absorb_indices(r);
          rec.corank = rs.corank();
        }
        degree[t] = st.cols_by_degree;
        trials[t] = rec;
      });
      CoreCell cell;
      cell.n = n;
      cell.alpha = alpha;
      cell.theory = theory;
      std::vector<double> rf, of, inf;
      long exceed = 0, eventE = 0;
      std::vector<double> hist;
      for (std::size_t t = 0; t < trials.size(); ++t) {
        const auto& rec = trials[t];
        rf.push_back(static_cast<double>(rec.rows) / static_cast<double>(n));
        of.push_back(static_cast<double>(rec.occupied) / static_cast<double>(n));
        inf.push_back(static_cast<double>(rec.incidences) / static_cast<double>(n));
        const bool more_rows = rec.rows > rec.occupied;
        exceed += more_rows;
        eventE += rec.event_E;
        if (rec.corank && more_rows) {
          ++cell.hypercycle_checked;
          if (*rec.corank < 1) ++cell.hypercycle_violations;
        }
        if (hist.size() < degree[t].size()) hist.resize(degree[t].size(), 0.0);
        for (std::size_t d = 0; d < degree[t].size(); ++d) hist[d] += static_cast<double>(degree[t][d]);
      }
      const double total_cols = static_cast<double>(n) * static_cast<double>(cfg.trials);
      for (auto& v : hist) v /= total_cols;
      cell.degree_hist = hist;
      cell.row_frac = mean_of(rf);
      cell.occupied_frac = mean_of(of);
      cell.incidence_frac = mean_of(inf);
      cell.row_rel_err = rel_err(cell.row_frac, theory.core_row_frac);
      cell.occupied_rel_err = rel_err(cell.occupied_frac, theory.occupied_col_frac);
      cell.incidence_rel_err = rel_err(cell.incidence_frac, theory.incidence_frac);
      cell.frac_rows_exceed = static_cast<double>(exceed) / static_cast<double>(cfg.trials);
      cell.ci_rows_exceed = proportion_ci(cell.frac_rows_exceed, cfg.trials);
      cell.frac_E = static_cast<double>(eventE) / static_cast<double>(cfg.trials);
      out.cells.push_back(cell);
      out.trials.insert(out.trials.end(), trials.begin(), trials.end());
      ++c;
    }
  }
  return out;
}

NullGrowthSummary exp_null_growth(const ExperimentConfig& cfg) {
  NullGrowthSummary out;
  out.alpha_star = alpha_star(cfg.dist).value;
  const int r0 = cfg.dist.min_weight();
  std::size_t c = 0;
  for (double alpha : cfg.alpha_list) {
    const double F = F_of_alpha(cfg.dist, alpha).value;
    for (long n : cfg.n_list) {
      NullGrowthCell cell;
      cell.n = n;
      cell.alpha = alpha;
      cell.m = static_cast<long>(std::floor(alpha * static_cast<double>(n)));
      cell.F = F;
      const double scale = std::pow(static_cast<double>(n), r0 - 2);
      const auto en = expected_null_count(n, cell.m, cfg.dist, cfg.model, false);
      {
        PrecisionScope scope(en.bits_used);
        cell.exact_log_rate = to_double(BigReal(log(en.total))) / static_cast<double>(n);
        cell.exact_scaled = to_double(BigReal((en.total - 1) * scale));
      }
      if (cfg.trials > 0) {
        std::vector<std::size_t> ck(static_cast<std::size_t>(cfg.trials));
        parallel_trials(cfg.trials, cfg.threads, [&](long t) {
          SampleConfig sc{static_cast<int>(n), cell.m, cfg.dist, cfg.model, cell_trial_seed(cfg.seed, c, t)};
          Xoshiro256 rng(sc.seed);
          RankState rs(static_cast<std::size_t>(n));
          for (long i = 0; i < sc.m; ++i) rs.absorb_indices(sample_row(sc, rng));
          ck[t] = rs.corank();
        });
        std::vector<double> N;
        for (auto k : ck) N.push_back(std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(k, 1000))));
        cell.trials = cfg.trials;
        cell.mean_N = mean_of(N);
        cell.se_N = se_of(N);
        cell.scaled = (cell.mean_N - 1) * scale;
        cell.scaled_se = cell.se_N * scale;
        out.coranks.insert(out.coranks.end(), ck.begin(), ck.end());
      }
      out.cells.push_back(cell);
      ++c;
    }
  }
  return out;
}

long first_dependency_small_weight(const SampleConfig& cfg, std::optional<long> cap) {
  if (!cfg.dist.is_point_mass() || cfg.dist.min_weight() > 2)
    throw InvalidParam("fast first-dependency detection needs fixed weight 1 or 2");
  if (cfg.model != WeightModel::exact) throw InvalidParam("fast first-dependency detection needs the exact model");
  const int n = cfg.n;
  const int r = std::min(cfg.dist.min_weight(), n);
  Xoshiro256 rng(cfg.seed);
  const long limit = cap ? std::min<long>(*cap, n + 1) : n + 1;
  if (r == 1) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (long m = 1; m <= limit; ++m) {
      auto row = sample_row(cfg, rng);
      if (seen[row[0]]++) return m;
    }
    return limit + 1;
  }
  std::vector<std::uint32_t> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (long m = 1; m <= limit; ++m) {
    auto row = sample_row(cfg, rng);
    const auto a = find(row[0]), b = find(row[1]);
    if (a == b) return m;
    parent[a] = b;
  }
  return limit + 1;
}

namespace {

// Erdos-Renyi graph process: distinct uniformly random edges until the first cycle.
long first_cycle_distinct_edges(int n, long cap, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  std::vector<std::uint32_t> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0u);
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_set<std::uint64_t> edges;
  for (long m = 1; m <= cap;) {
    auto e = sample_subset(2, n, rng);
    const std::uint64_t key = (static_cast<std::uint64_t>(e[0]) << 32) | e[1];
    if (!edges.insert(key).second) continue;
    const auto a = find(e[0]), b = find(e[1]);
    if (a == b) return m;
    parent[a] = b;
    ++m;
  }
  return cap + 1;
}

}  // namespace

double birthday_limit(double z) { return std::exp(-z * z / 2); }
double first_cycle_limit(double z) { return std::sqrt(1 - z) * std::exp(z / 2 + z * z / 4); }

ClassicalSummary exp_classical_limits(const ExperimentConfig& cfg) {
  require_trials(cfg);
  ClassicalSummary out;
  if (cfg.id == "dense") {
    const long n = cfg.dense_n;
    if (n < 1 || n > 62) throw InvalidParam("dense experiment supports 1 <= n <= 62");
    std::vector<long> T(static_cast<std::size_t>(cfg.dense_trials));
    parallel_trials(cfg.dense_trials, cfg.threads, [&](long t) {
      Xoshiro256 rng(cell_trial_seed(cfg.seed, 0, t));
      RankState rs(static_cast<std::size_t>(n));
      const std::uint64_t nonzero = (1ULL << n) - 1;
      long m = 1;
      for (;; ++m) {
        BitVector v(static_cast<std::size_t>(n));
        v.words()[0] = rng.below(nonzero) + 1;
        if (rs.absorb(v)) break;
      }
      T[t] = m;
    });
    for (long r = 1; r <= cfg.dense_r_max && r <= n; ++r) {
      ClassicalRow row;
      row.what = "dense";
      row.r = r;
      row.n = n;
      row.trials = cfg.dense_trials;
      long surv = 0;
      for (long v : T) surv += v > n + 1 - r;
      row.empirical = static_cast<double>(surv) / static_cast<double>(cfg.dense_trials);
      row.ci = proportion_ci(row.empirical, cfg.dense_trials);
      row.theory = gfq_dense_survival(2, r).value;
      row.exact_finite = gfq_dense_survival(2, r, n).value;
      out.rows.push_back(row);
    }
    return out;
  }
  const int r = cfg.dist.min_weight();
  if (!cfg.dist.is_point_mass() || r > 2) throw InvalidParam("classical limits need fixed weight 1 or 2");
  for (long n : cfg.n_list) {
    const double z = cfg.z;
    const double threshold = r == 1 ? z * std::sqrt(static_cast<double>(n)) : z * static_cast<double>(n) / 2;
    const long cap = static_cast<long>(std::floor(threshold));
    std::vector<char> iid(static_cast<std::size_t>(cfg.trials)), distinct(iid.size());
    parallel_trials(cfg.trials, cfg.threads, [&](long t) {
      SampleConfig sc{static_cast<int>(n), 0, cfg.dist, WeightModel::exact, cell_trial_seed(cfg.seed, 0, t)};
      iid[t] = static_cast<double>(first_dependency_small_weight(sc, cap)) > threshold;
      if (r == 2) distinct[t] = static_cast<double>(first_cycle_distinct_edges(static_cast<int>(n), cap, sc.seed)) > threshold;
    });
    ClassicalRow row;
    row.r = r;
    row.n = n;
    row.z = z;
    row.trials = cfg.trials;
    row.empirical = static_cast<double>(std::count(iid.begin(), iid.end(), 1)) / static_cast<double>(cfg.trials);
    row.ci = proportion_ci(row.empirical, cfg.trials);
    if (r == 1) {
      row.what = "birthday";
      row.theory = birthday_limit(z);
      double lp = 0;
      for (long j = 1; j < cap; ++j) lp += std::log1p(-static_cast<double>(j) / static_cast<double>(n));
      row.exact_finite = std::exp(lp);
      out.rows.push_back(row);
    } else {
      // i.i.d. rows: repeated rows add 2-cycles, worth a factor exp(-z^2/4)
      row.what = "first_dependency_iid";
      row.theory = first_cycle_limit(z) * std::exp(-z * z / 4);
      out.rows.push_back(row);
      ClassicalRow g = row;
      g.what = "first_cycle";
      g.empirical = static_cast<double>(std::count(distinct.begin(), distinct.end(), 1)) / static_cast<double>(cfg.trials);
      g.ci = proportion_ci(g.empirical, cfg.trials);
      g.theory = first_cycle_limit(z);
      out.rows.push_back(g);
    }
  }
  return out;
}

ProfileSummary exp_weight_profile(const ExperimentConfig& cfg) {
  require_trials(cfg);
  if (cfg.n_list.size() != 1 || cfg.alpha_list.size() != 1)
    throw InvalidParam("profile experiment takes one n and one alpha (m = floor(alpha n))");
  ProfileSummary out;
  out.n = cfg.n_list[0];
  out.m = static_cast<long>(std::floor(cfg.alpha_list[0] * static_cast<double>(out.n) + 1e-9));
  if (out.m > 24) throw TooLarge("profile experiment enumerates null vectors, m <= 24");
  out.trials = cfg.trials;
  const auto ex = expected_null_count_exact(out.n, out.m, cfg.dist, cfg.model);
  for (const auto& p : ex.profile) out.exact.push_back(to_double(Rational(p / ex.total)));
  std::vector<std::vector<std::uint64_t>> prof(static_cast<std::size_t>(cfg.trials));
  parallel_trials(cfg.trials, cfg.threads, [&](long t) {
    SampleConfig sc{static_cast<int>(out.n), out.m, cfg.dist, cfg.model, cell_trial_seed(cfg.seed, 0, t)};
    prof[t] = enumerate_null_vectors(sample_matrix(sc)).weight_profile;
  });
  std::vector<double> sums(static_cast<std::size_t>(out.m) + 1, 0.0);
  double total = 0;
  for (const auto& p : prof)
    for (std::size_t l = 0; l < p.size(); ++l) {
      sums[l] += static_cast<double>(p[l]);
      total += static_cast<double>(p[l]);
    }
  for (double s : sums) out.empirical.push_back(s / total);
  for (std::size_t l = 0; l < sums.size(); ++l) out.tv += 0.5 * std::abs(out.exact[l] - out.empirical[l]);
  return out;
}

void write_csv(std::ostream& os, const TnWindowSummary& s) {
  os << "trial,seed,T_n,n,T_n/n\n";
  std::size_t k = 0;
  for (const auto& c : s.cells)
    for (std::size_t t = 0; t < c.T.size(); ++t, ++k)
      os << t << ',' << s.seeds[k] << ',' << c.T[t] << ',' << c.n << ','
         << static_cast<double>(c.T[t]) / static_cast<double>(c.n) << '\n';
}

void write_csv(std::ostream& os, const CoreSummary& s) {
  os << "n,alpha,seed,core_rows,occupied_cols,incidences,event_E,corank\n";
  for (const auto& t : s.trials) {
    os << t.n << ',' << t.alpha << ',' << t.seed << ',' << t.rows << ',' << t.occupied << ',' << t.incidences << ','
       << (t.event_E ? 1 : 0) << ',';
    if (t.corank) os << *t.corank;
    os << '\n';
  }
}

void write_csv(std::ostream& os, const NullGrowthSummary& s) {
  os << "n,m,alpha,trial,corank\n";
  std::size_t k = 0;
  for (const auto& c : s.cells)
    for (long t = 0; t < c.trials; ++t, ++k)
      os << c.n << ',' << c.m << ',' << c.alpha << ',' << t << ',' << s.coranks[k] << '\n';
}

void write_csv(std::ostream& os, const ClassicalSummary& s) {
  os << "what,r,n,z,trials,empirical,ci_lo,ci_hi,theory,exact_finite\n";
  for (const auto& r : s.rows)
    os << r.what << ',' << r.r << ',' << r.n << ',' << r.z << ',' << r.trials << ',' << r.empirical << ','
       << r.ci.lo << ',' << r.ci.hi << ',' << r.theory << ',' << r.exact_finite << '\n';
}

void write_csv(std::ostream& os, const ProfileSummary& s) {
  os << "l,exact,empirical\n";
  for (std::size_t l = 0; l < s.exact.size(); ++l) os << l << ',' << s.exact[l] << ',' << s.empirical[l] << '\n';
}

nlohmann::json to_json(const TnWindowSummary& s) {
  nlohmann::json j = {{"alpha_star", s.alpha_star}, {"alpha_bar", s.alpha_bar},
                      {"window", {s.window_lo, s.window_hi}}, {"cells", nlohmann::json::array()}};
  for (const auto& c : s.cells)
    j["cells"].push_back({{"n", c.n},
                          {"trials", c.T.size()},
                          {"mean_T_over_n", c.mean_ratio},
                          {"frac_in_window", c.frac_in_window},
                          {"ci95", interval_json(c.ci)},
                          {"all_T_at_most_n_plus_1", c.all_at_most_n_plus_1}});
  return j;
}

nlohmann::json to_json(const CoreSummary& s) {
  nlohmann::json j = {{"cells", nlohmann::json::array()}};
  for (const auto& c : s.cells)
    j["cells"].push_back({{"n", c.n},
                          {"alpha", c.alpha},
                          {"measured",
                           {{"core_rows", c.row_frac}, {"occupied_cols", c.occupied_frac}, {"incidences", c.incidence_frac}}},
                          {"theory",
                           {{"g_star", c.theory.g_star},
                            {"nu", c.theory.nu},
                            {"core_rows", c.theory.core_row_frac},
                            {"occupied_cols", c.theory.occupied_col_frac},
                            {"incidences", c.theory.incidence_frac},
                            {"aspect_sign", c.theory.aspect_sign}}},
                          {"rel_err",
                           {{"core_rows", c.row_rel_err}, {"occupied_cols", c.occupied_rel_err}, {"incidences", c.incidence_rel_err}}},
                          {"frac_rows_exceed_cols", c.frac_rows_exceed},
                          {"ci95_rows_exceed_cols", interval_json(c.ci_rows_exceed)},
                          {"frac_event_E", c.frac_E},
                          {"hypercycle_checked", c.hypercycle_checked},
                          {"hypercycle_violations", c.hypercycle_violations}});
  return j;
}

nlohmann::json to_json(const NullGrowthSummary& s) {
  nlohmann::json j = {{"alpha_star", s.alpha_star}, {"cells", nlohmann::json::array()}};
  for (const auto& c : s.cells)
    j["cells"].push_back({{"n", c.n},
                          {"m", c.m},
                          {"alpha", c.alpha},
                          {"trials", c.trials},
                          {"mean_N", c.mean_N},
                          {"se_N", c.se_N},
                          {"scaled_excess", c.scaled},
                          {"scaled_excess_se", c.scaled_se},
                          {"exact_scaled_excess", c.exact_scaled},
                          {"exact_log_rate", c.exact_log_rate},
                          {"F", c.F}});
  return j;
}

nlohmann::json to_json(const ClassicalSummary& s) {
  nlohmann::json j = {{"rows", nlohmann::json::array()}};
  for (const auto& r : s.rows)
    j["rows"].push_back({{"what", r.what},
                         {"r", r.r},
                         {"n", r.n},
                         {"z", r.z},
                         {"trials", r.trials},
                         {"empirical", r.empirical},
                         {"ci95", interval_json(r.ci)},
                         {"theory", r.theory},
                         {"exact_finite", r.exact_finite}});
  return j;
}

nlohmann::json to_json(const ProfileSummary& s) {
  return {{"n", s.n}, {"m", s.m}, {"trials", s.trials}, {"exact", s.exact}, {"empirical", s.empirical}, {"tv", s.tv}};
}

}  // namespace sparsegf2
