#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsegf2/bigreal.hpp"
#include "sparsegf2/weight_model.hpp"

namespace sparsegf2 {

struct ThresholdOptions {
  int curve_points = 8192;       // grid for h and psi, see CurveAnalysis
  int gamma_points = 2048;       // uniform part of the gamma grid for F
  double min_prominence = 1e-10;  // a local minimum of h must undercut later ones by this much
  double tol_F = 1e-11;          // F_rho(alpha) counts as positive above this
  double alpha_tol = 1e-12;      // bisection width for alpha*
  double route_tol = 1e-6;       // agreement required between alpha* routes
  double t_max = 34.0;           // largest t = -log(1-x) on the curve grid
};

// log[(1 + rho(1-2g))^alpha / (2 g^g (1-g)^(1-g))], with 0^0 = 1.
double F_gamma(const WeightDist& dist, double alpha, double gamma);
double dF_dgamma(const WeightDist& dist, double alpha, double gamma);

struct FResult {
  double value = 0;   // sup over gamma in [0, 1/2]; never negative
  double gamma0 = 0.5;  // smallest maximizer
  double beta0 = 0;
};
FResult F_of_alpha(const WeightDist& dist, double alpha, const ThresholdOptions& opt = {});

// True when F_rho(alpha) > 0, including growth that starts right at gamma = 1/2.
bool F_positive(const WeightDist& dist, double alpha, const ThresholdOptions& opt = {});

struct AlphaStarResult {
  double value = 0;
  std::optional<double> stationary_route;  // fixed weight r >= 3 only
  std::optional<double> lambda_route;      // fixed weight r >= 3 only
  std::optional<double> gamma_stationary;  // maximizer found by the stationary route
};
AlphaStarResult alpha_star(const WeightDist& dist, const ThresholdOptions& opt = {});

// The two independent fixed-weight routes, exposed for testing.
double alpha_star_stationary(int r, double* gamma_out = nullptr);
double alpha_star_lambda(int r, double* lambda_out = nullptr);
BigReal alpha_star_lambda_big(int r, unsigned bits = kDefaultPrecisionBits);

// -log sup_gamma rho(1-2g)^alpha / (2 g^g (1-g)^(1-g)).
double R_of_alpha(const WeightDist& dist, double alpha, const ThresholdOptions& opt = {});

// Closed-form rate for single balls: with lambda tanh lambda = alpha,
// (lambda tanh lambda)(1 - log tanh lambda) - log cosh lambda.
double ehrenfest_rate(double alpha);

struct HPsi {
  double h = 0, psi = 0, dh = 0, dpsi = 0;
};
HPsi h_psi(const WeightDist& dist, double x);
// Same quantities parametrized by t = -log(1-x); accurate for x near 1.
HPsi h_psi_t(const WeightDist& dist, double t);

struct Discontinuity {
  double alpha = 0;
  double g_left = 0;   // limit of g* from below
  double g_right = 0;  // value of g* at alpha (right-continuous)
};

struct AlphaBar {
  double value = 0;
  double x_star = 0;
  bool via_jump = false;     // attained at a discontinuity of g*
  bool transversal = true;   // psi crosses zero with nonzero slope
};

struct SignEvent {
  double alpha = 0;
  int sign = 0;           // sign of psi(g*) just after alpha
  bool at_jump = false;   // change happens at a discontinuity of g*
};

// Dense analysis of h and psi for one weight law. Candidate points are a grid
// in t = -log(1-x) (a quarter of them uniform in x on (0, 1/2]) merged with
// every refined local extremum of h, so h and psi are monotone between
// consecutive candidates.
class CurveAnalysis {
 public:
  explicit CurveAnalysis(const WeightDist& dist, const ThresholdOptions& opt = {});

  const WeightDist& dist() const { return dist_; }
  double h_at_zero() const { return h0_; }  // limit of h at 0+, possibly infinite
  double alpha_sharp() const { return alpha_sharp_; }
  bool sharp_at_zero() const { return sharp_at_zero_; }
  const std::vector<double>& local_minima() const { return minima_x_; }
  const std::vector<double>& local_minima_values() const { return minima_h_; }
  const std::vector<Discontinuity>& discontinuities() const { return jumps_; }
  const std::vector<double>& psi_roots() const { return psi_roots_; }

  // sup{x in (0,1): h(x) <= alpha}, 0 if empty.
  double g_star(double alpha) const;
  // Only defined when the minimum weight is at least 3.
  std::optional<AlphaBar> alpha_bar() const;
  std::vector<SignEvent> sign_events() const;
  std::string sign_pattern() const;  // e.g. "+,-,+,-"

 private:
  double h_t(double t) const;
  double psi_t(double t) const;
  double refine_extremum(double lo, double hi) const;
  double crossing_t(double lo, double hi, double alpha, bool strict) const;
  double rightmost_t(double alpha, bool strict) const;
  double psi_root(double lo, double hi) const;

  WeightDist dist_;
  ThresholdOptions opt_;
  std::vector<double> t_, h_, psi_;  // merged candidates
  double h0_ = 0;
  double alpha_sharp_ = 0;
  bool sharp_at_zero_ = false;
  std::vector<double> minima_x_, minima_h_, minima_t_;
  std::vector<Discontinuity> jumps_;
  std::vector<double> psi_roots_, psi_roots_t_;
};

struct AlphaSharp {
  double value = 0;
  std::vector<double> minimizers;  // all interior local minima of h
  bool at_zero = false;            // infimum approached as x -> 0+
};
AlphaSharp alpha_sharp(const WeightDist& dist, const ThresholdOptions& opt = {});
double g_star(const WeightDist& dist, double alpha, const ThresholdOptions& opt = {});
std::vector<Discontinuity> discontinuities(const WeightDist& dist, const ThresholdOptions& opt = {});
std::optional<AlphaBar> alpha_bar(const WeightDist& dist, const ThresholdOptions& opt = {});

struct XStarIteration {
  double x_star = 0;
  std::vector<double> lower, upper;  // a_n and b_n
  bool monotone = true;              // a_n increasing, b_n decreasing (checked in BigReal)
  double gap = 1;
};
// Sandwich iteration for the fixed-weight root of psi.
XStarIteration x_star_iteration(int r, int steps = 10000, double tol = 1e-14);
BigReal x_star_big(int r, unsigned bits = kDefaultPrecisionBits);

struct CoreTheory {
  double alpha = 0;
  double g_star = 0;
  double mu = 0;
  double nu = 0;
  double core_row_frac = 0;
  double occupied_col_frac = 0;
  double incidence_frac = 0;
  int aspect_sign = 0;  // sign of psi(g*)
  bool at_discontinuity = false;
  std::vector<double> degree_pmf;  // column degree in the core, d = 0..max
};
CoreTheory core_theory(const CurveAnalysis& curves, double alpha, int max_degree = 40);
CoreTheory core_theory(const WeightDist& dist, double alpha, const ThresholdOptions& opt = {});

struct AsymptoticsRow {
  int r = 0;
  BigReal alpha_star, alpha_bar;
  double star_scaled = 0;  // (1 - alpha*) e^r log 2
  double bar_scaled = 0;   // (1 - alpha_bar) e^r
};
std::vector<AsymptoticsRow> threshold_asymptotics(int r_max, unsigned bits = kDefaultPrecisionBits);

struct ThresholdReport {
  WeightDist dist;
  double alpha_sharp = 0;
  bool sharp_at_zero = false;
  AlphaStarResult alpha_star;
  std::optional<AlphaBar> alpha_bar;
  std::optional<XStarIteration> x_star_fixed;  // fixed weight r >= 3
  std::vector<Discontinuity> discontinuities;
  std::vector<double> psi_roots;
  std::vector<SignEvent> sign_events;
  std::string sign_pattern;
  double witness_alpha = 0;
  FResult witness;
  ThresholdOptions options;
};
// witness_alpha defaults to alpha* (gamma0 and beta0 reported there).
ThresholdReport threshold_report(const WeightDist& dist, std::optional<double> witness_alpha = std::nullopt,
                                 const ThresholdOptions& opt = {});

}  // namespace sparsegf2
