#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/thresholds.hpp"
#include "sparsegf2/weight_model.hpp"

namespace sparsegf2 {

struct ExperimentConfig {
  std::string id;
  WeightDist dist = WeightDist::point_mass(3);
  WeightModel model = WeightModel::exact;
  std::vector<long> n_list;
  std::vector<double> alpha_list;
  long trials = 100;
  std::uint64_t seed = 1;
  int threads = 0;              // 0 = hardware concurrency
  double eps = 0.02;            // T_n window half-margin
  double core_eps = 0.05;       // epsilon of the core event
  double z = 1.0;               // classical-limit scale
  long rank_check_max_n = 2000;  // rank cross-check in the core experiment up to this n
  int dense_r_max = 5;          // classical: dense GF(2) survival for r = 1..dense_r_max
  long dense_n = 30;
  long dense_trials = 100000;
};

// Normal-approximation 95% interval for a proportion or a mean.
struct Interval {
  double lo = 0, hi = 0;
};
Interval proportion_ci(double p, long trials);

// Runs fn(trial) for trial in [0, trials) on up to `threads` workers. fn must
// write only to its own slot; results do not depend on scheduling.
void parallel_trials(long trials, int threads, const std::function<void(long)>& fn);

// Seed of one trial in one cell of an experiment grid.
std::uint64_t cell_trial_seed(std::uint64_t seed, std::size_t cell, long trial);

struct TnCell {
  long n = 0;
  std::vector<long> T;
  double mean_ratio = 0;
  double frac_in_window = 0;
  Interval ci;
  bool all_at_most_n_plus_1 = true;
};
struct TnWindowSummary {
  double alpha_star = 0, alpha_bar = 0, window_lo = 0, window_hi = 0;
  std::vector<TnCell> cells;
  std::vector<std::uint64_t> seeds;  // per record, same order as the CSV
};
TnWindowSummary exp_Tn_window(const ExperimentConfig& cfg);

struct CoreTrial {
  long n = 0;
  double alpha = 0;
  std::uint64_t seed = 0;
  std::size_t rows = 0, occupied = 0, incidences = 0;
  bool event_E = false;
  std::optional<std::size_t> corank;
};
struct CoreCell {
  long n = 0;
  double alpha = 0;
  CoreTheory theory;
  double row_frac = 0, occupied_frac = 0, incidence_frac = 0;
  double row_rel_err = 0, occupied_rel_err = 0, incidence_rel_err = 0;
  double frac_rows_exceed = 0;  // core rows > occupied columns
  Interval ci_rows_exceed;
  double frac_E = 0;
  long hypercycle_checked = 0, hypercycle_violations = 0;
  std::vector<double> degree_hist;  // empirical core column-degree distribution
};
struct CoreSummary {
  std::vector<CoreCell> cells;
  std::vector<CoreTrial> trials;
};
CoreSummary exp_core_vs_theory(const ExperimentConfig& cfg);

struct NullGrowthCell {
  long n = 0, m = 0;
  double alpha = 0;
  long trials = 0;
  double mean_N = 0, se_N = 0;
  double scaled = 0, scaled_se = 0;  // n^(r0-2) (mean N - 1)
  double exact_scaled = 0;           // same from the exact expectation
  double exact_log_rate = 0;         // (1/n) log E[N]
  double F = 0;                      // F_rho(alpha)
};
struct NullGrowthSummary {
  double alpha_star = 0;
  std::vector<NullGrowthCell> cells;
  std::vector<std::size_t> coranks;  // per trial, grouped by cell
};
// Monte Carlo only for alpha < alpha* (or when trials > 0); exact values always.
NullGrowthSummary exp_null_growth(const ExperimentConfig& cfg);

struct ClassicalRow {
  std::string what;  // "birthday", "first_cycle", "dense"
  long r = 0, n = 0, trials = 0;
  double z = 0;
  double empirical = 0;
  Interval ci;
  double theory = 0;        // limit formula
  double exact_finite = 0;  // finite-n exact value where available
};
struct ClassicalSummary {
  std::vector<ClassicalRow> rows;
};
// r in {1, 2} from cfg.dist, or "dense" when cfg.id == "dense".
ClassicalSummary exp_classical_limits(const ExperimentConfig& cfg);
// First dependency for weight-1 rows (repeated column) and weight-2 rows
// (first cycle); equal to run_Tn for those laws but near-linear time.
long first_dependency_small_weight(const SampleConfig& cfg, std::optional<long> cap = std::nullopt);
double birthday_limit(double z);
double first_cycle_limit(double z);

struct ProfileSummary {
  long n = 0, m = 0, trials = 0;
  std::vector<double> exact, empirical;
  double tv = 0;
};
ProfileSummary exp_weight_profile(const ExperimentConfig& cfg);

// CSV per-trial records and JSON summaries.
void write_csv(std::ostream& os, const TnWindowSummary& s);
void write_csv(std::ostream& os, const CoreSummary& s);
void write_csv(std::ostream& os, const NullGrowthSummary& s);
void write_csv(std::ostream& os, const ClassicalSummary& s);
void write_csv(std::ostream& os, const ProfileSummary& s);
nlohmann::json to_json(const TnWindowSummary& s);
nlohmann::json to_json(const CoreSummary& s);
nlohmann::json to_json(const NullGrowthSummary& s);
nlohmann::json to_json(const ClassicalSummary& s);
nlohmann::json to_json(const ProfileSummary& s);

}  // namespace sparsegf2
