#include "sparsegf2/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLog2 = std::log(2.0);


// log 2 + g log g + (1-g) log(1-g) written in s = 1 - 2g, accurate near g = 1/2.
double log2_plus_entropy_neg(double g) {
  const double s = 1 - 2 * g;
  const double a = s < 1 ? (1 - s) * std::log1p(-s) : 0.0;
  return 0.5 * ((1 + s) * std::log1p(s) + a);
}

int sign_of(double v) { return (v > 0) - (v < 0); }

// Root of f on [lo, hi] given f(lo) and f(hi) of opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  const int slo = sign_of(f(lo));
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sign_of(f(mid)) == slo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Maximizer of f on [a, b] by golden-section search.
double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1) / 2;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 300 && b - a > 1e-16 * std::max(1.0, std::abs(a)); ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Grid on [0, 1/2] for optimizations over gamma: uniform, plus log-spaced
// points near both ends where optimizers of sharply peaked laws sit.
std::vector<double> gamma_grid(int uniform_points, bool include_half) {
  std::vector<double> g;
  for (int i = 0; i <= uniform_points; ++i) g.push_back(0.5 * i / uniform_points);
  for (int i = 0; i <= 512; ++i) {
    const double e = -20.0 + 17.0 * i / 512;  // 1e-20 .. 1e-3
    g.push_back(std::pow(10.0, e));
    if (e >= -12) g.push_back(0.5 - std::pow(10.0, e));
  }
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  if (!include_half) g.pop_back();
  return g;
}

struct Max1D {
  double x = 0, value = -kInf;
};

// All interior local maxima of `value` on the grid, refined through the sign
// of `deriv` (bisection) with golden-section search as fallback.
std::vector<Max1D> local_maxima(const std::vector<double>& grid, const std::function<double(double)>& value,
                                const std::function<double(double)>& deriv) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = value(grid[i]);
  std::vector<Max1D> out;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (!(v[i] >= v[i - 1] && v[i] >= v[i + 1])) continue;
    if (v[i] == v[i - 1] && v[i] == v[i + 1]) continue;
    const double lo = grid[i - 1], hi = grid[i + 1];
    double x;
    if (deriv(lo) > 0 && deriv(hi) < 0)
      x = bisect(deriv, lo, hi);
    else
      x = golden_max(value, lo, hi);
    double fx = value(x);
    if (fx < v[i]) {
      x = grid[i];
      fx = v[i];
    }
    out.push_back({x, fx});
  }
  return out;
}

}  // namespace

double F_gamma(const WeightDist& dist, double alpha, double gamma) {
  if (gamma < 0 || gamma > 0.5) throw InvalidParam("gamma must lie in [0, 1/2]");
  if (gamma == 0.5) return 0.0;  // rho(0) = 0, so both terms cancel exactly
  const double s = 1 - 2 * gamma;
  return alpha * std::log1p(dist.pgf(s)) - log2_plus_entropy_neg(gamma);
}

double dF_dgamma(const WeightDist& dist, double alpha, double gamma) {
  const double s = 1 - 2 * gamma;
  if (gamma <= 0) return kInf;
  return -2 * alpha * dist.pgf(s, 1) / (1 + dist.pgf(s)) + std::log((1 - gamma) / gamma);
}

FResult F_of_alpha(const WeightDist& dist, double alpha, const ThresholdOptions& opt) {
  if (alpha < 0) throw InvalidParam("alpha must be >= 0");
  auto grid = gamma_grid(opt.gamma_points, true);
  auto maxima = local_maxima(
      grid, [&](double g) { return F_gamma(dist, alpha, g); },
      [&](double g) { return dF_dgamma(dist, alpha, g); });
  FResult out;
  double best = 0.0;  // the endpoint gamma = 1/2
  for (const auto& m : maxima) best = std::max(best, m.value);
  // smallest maximizer, treating values within rounding noise as ties
  constexpr double tie = 1e-14;
  for (const auto& m : maxima) {
    if (m.value >= best - tie && m.x < out.gamma0) {
      out.gamma0 = m.x;
    }
  }
  out.value = best;
  const double rho = dist.pgf(1 - 2 * out.gamma0);
  out.beta0 = rho / (1 + rho);
  return out;
}

bool F_positive(const WeightDist& dist, double alpha, const ThresholdOptions& opt) {
  if (alpha <= 0) return false;
  // Near gamma = 1/2, F ~ alpha p1 s + (2 alpha p2 - 1) s^2 / 2 with s = 1 - 2 gamma.
  if (dist.prob(1) > 0) return true;
  if (2 * alpha * dist.prob(2) > 1) return true;
  return F_of_alpha(dist, alpha, opt).value > opt.tol_F;
}

double alpha_star_stationary(int r, double* gamma_out) {
  if (r < 3) throw InvalidParam("stationary route needs r >= 3");
  // alpha making gamma stationary, minus alpha making F vanish at gamma
  auto diff = [r](double g) {
    const double u = 1 - 2 * g;
    const double ur = std::pow(u, r);
    const double a = (1 + ur) / (2.0 * r * std::pow(u, r - 1)) * std::log((1 - g) / g);
    const double phi = log2_plus_entropy_neg(g) / std::log1p(ur);
    return a - phi;
  };
  // log-spaced scan from 1e-30 up to just below 1/2
  double prev_g = 1e-30, prev = diff(prev_g);
  for (int i = 1; i <= 6000; ++i) {
    const double lg = -30.0 + (std::log10(0.5 - 1e-9) + 30.0) * i / 6000;
    const double g = std::pow(10.0, lg);
    const double v = diff(g);
    if (prev > 0 && v <= 0) {
      const double root = bisect(diff, prev_g, g);
      const double u = 1 - 2 * root;
      if (gamma_out) *gamma_out = root;
      return (1 + std::pow(u, r)) / (2.0 * r * std::pow(u, r - 1)) * std::log((1 - root) / root);
    }
    prev = v;
    prev_g = g;
  }
  throw NoConvergence("stationary route found no root");
}

namespace {

double log_cosh(double l) { return l + std::log1p(std::exp(-2 * l)) - kLog2; }

double lambda_alpha(int r, double l) {
  const double t = std::tanh(l);
  return (1 + std::pow(t, -r)) * l * t / r;
}

double lambda_G(int r, double l) {
  const double t = std::tanh(l);
  return lambda_alpha(r, l) * std::log1p(std::pow(t, r)) - l * t + log_cosh(l);
}

// Bracket for the largest root of the lambda system.
std::pair<double, double> lambda_bracket(int r) {
  double hi_l = 0;
  double prev_l = 0.01, prev = lambda_G(r, prev_l);
  for (int i = 2; i <= 6000; ++i) {
    const double l = 0.01 * i;
    const double v = lambda_G(r, l);
    if (prev < 0 && v >= 0) hi_l = l;
    prev = v;
    prev_l = l;
  }
  if (hi_l == 0) throw NoConvergence("lambda system has no root");
  return {hi_l - 0.01, hi_l};
}

}  // namespace

double alpha_star_lambda(int r, double* lambda_out) {
  if (r < 3) throw InvalidParam("lambda route needs r >= 3");
  auto [lo, hi] = lambda_bracket(r);
  const double l = bisect([r](double x) { return lambda_G(r, x); }, lo, hi);
  if (lambda_out) *lambda_out = l;
  return lambda_alpha(r, l);
}

BigReal alpha_star_lambda_big(int r, unsigned bits) {
  if (r < 3) throw InvalidParam("lambda route needs r >= 3");
  auto [dlo, dhi] = lambda_bracket(r);
  PrecisionScope scope(bits);
  const auto ur = static_cast<unsigned long>(r);
  auto alpha_of = [&](const BigReal& l) {
    BigReal t = tanh(l);
    return BigReal((1 + 1 / ipow(t, ur)) * l * t / r);
  };
  auto G = [&](const BigReal& l) {
    BigReal t = tanh(l);
    return BigReal(alpha_of(l) * log(1 + ipow(t, ur)) - l * t + log(cosh(l)));
  };
  BigReal lo(dlo), hi(dhi);
  for (unsigned i = 0; i < bits + 20; ++i) {
    BigReal mid = (lo + hi) / 2;
    if (G(mid) < 0)
      lo = mid;
    else
      hi = mid;
  }
  return alpha_of((lo + hi) / 2);
}

AlphaStarResult alpha_star(const WeightDist& dist, const ThresholdOptions& opt) {
  AlphaStarResult out;
  if (dist.prob(1) > 0) {
    out.value = 0;
    return out;
  }
  double lo = 0, hi = 2;
  if (!F_positive(dist, hi, opt)) throw NoConvergence("F is not positive at alpha = 2");
  while (hi - lo > opt.alpha_tol) {
    const double mid = 0.5 * (lo + hi);
    if (F_positive(dist, mid, opt))
      hi = mid;
    else
      lo = mid;
  }
  out.value = 0.5 * (lo + hi);
  if (dist.is_point_mass() && dist.min_weight() >= 3) {
    const int r = dist.min_weight();
    double g = 0;
    out.stationary_route = alpha_star_stationary(r, &g);
    out.gamma_stationary = g;
    out.lambda_route = alpha_star_lambda(r);
    const double d1 = std::abs(*out.stationary_route - out.value);
    const double d2 = std::abs(*out.lambda_route - out.value);
    if (d1 > opt.route_tol || d2 > opt.route_tol)
      throw Inconsistent("alpha* routes disagree: sup " + std::to_string(out.value) + ", stationary " +
                         std::to_string(*out.stationary_route) + ", lambda " +
                         std::to_string(*out.lambda_route));
  }
  return out;
}

double R_of_alpha(const WeightDist& dist, double alpha, const ThresholdOptions& opt) {
  if (!(alpha > 0)) throw InvalidParam("alpha must be > 0");
  auto grid = gamma_grid(opt.gamma_points, false);
  auto value = [&](double g) { return alpha * std::log(dist.pgf(1 - 2 * g)) - log2_plus_entropy_neg(g); };
  auto deriv = [&](double g) {
    if (g <= 0) return kInf;
    const double s = 1 - 2 * g;
    return -2 * alpha * dist.pgf(s, 1) / dist.pgf(s) + std::log((1 - g) / g);
  };
  double best = value(0.0);
  for (const auto& m : local_maxima(grid, value, deriv)) best = std::max(best, m.value);
  return -best;
}

double ehrenfest_rate(double alpha) {
  if (!(alpha > 0)) throw InvalidParam("alpha must be > 0");
  const double l = bisect([alpha](double x) { return x * std::tanh(x) - alpha; }, 0.0, alpha + 2.0);
  const double t = std::tanh(l);
  return alpha * (1 - std::log(t)) - log_cosh(l);
}

HPsi h_psi_t(const WeightDist& dist, double t) {
  if (!(t > 0)) throw InvalidParam("t must be positive");
  const double x = -std::expm1(-t);
  const double one_minus_x = std::exp(-t);
  const double r0 = dist.pgf(x), r1 = dist.pgf(x, 1), r2 = dist.pgf(x, 2);
  HPsi out;
  out.h = t / r1;
  out.psi = x - t * (one_minus_x + r0 / r1);
  out.dh = (1 / one_minus_x - t * r2 / r1) / r1;
  out.dpsi = -r0 * out.dh;
  return out;
}

HPsi h_psi(const WeightDist& dist, double x) {
  if (!(x > 0 && x < 1)) throw InvalidParam("x must lie in (0, 1)");
  return h_psi_t(dist, -std::log1p(-std::min(x, 1 - 1e-15)));
}

CurveAnalysis::CurveAnalysis(const WeightDist& dist, const ThresholdOptions& opt) : dist_(dist), opt_(opt) {
  if (dist_.prob(1) > 0)
    h0_ = 0;
  else if (dist_.prob(2) > 0)
    h0_ = 1 / (2 * dist_.prob(2));
  else
    h0_ = kInf;

  const int n1 = std::max(8, opt_.curve_points / 4);
  const int n2 = std::max(8, opt_.curve_points - n1);
  std::vector<double> base;
  for (int i = 1; i <= n1; ++i) base.push_back(-std::log1p(-0.5 * i / n1));
  for (int j = 1; j <= n2; ++j) base.push_back(kLog2 + (opt_.t_max - kLog2) * j / n2);

  std::vector<double> hb(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) hb[i] = h_t(base[i]);

  std::vector<double> extrema;
  for (std::size_t i = 1; i + 1 < base.size(); ++i) {
    const bool is_min = hb[i] < hb[i - 1] && hb[i] <= hb[i + 1];
    const bool is_max = hb[i] > hb[i - 1] && hb[i] >= hb[i + 1];
    if (!is_min && !is_max) continue;
    const double te = refine_extremum(base[i - 1], base[i + 1]);
    extrema.push_back(te);
    if (is_min) {
      minima_t_.push_back(te);
      minima_x_.push_back(-std::expm1(-te));
      minima_h_.push_back(h_t(te));
    }
  }

  t_ = base;
  t_.insert(t_.end(), extrema.begin(), extrema.end());
  std::sort(t_.begin(), t_.end());
  t_.erase(std::unique(t_.begin(), t_.end()), t_.end());
  h_.resize(t_.size());
  psi_.resize(t_.size());
  for (std::size_t i = 0; i < t_.size(); ++i) {
    h_[i] = h_t(t_[i]);
    psi_[i] = psi_t(t_[i]);
  }

  alpha_sharp_ = h0_;
  for (double v : minima_h_) alpha_sharp_ = std::min(alpha_sharp_, v);
  sharp_at_zero_ = minima_h_.empty() || h0_ <= *std::min_element(minima_h_.begin(), minima_h_.end());

  // A local minimum makes g* jump when every later local minimum is higher.
  double later = kInf;
  for (std::size_t k = minima_h_.size(); k-- > 0;) {
    if (minima_h_[k] < later - opt_.min_prominence) {
      Discontinuity d;
      d.alpha = minima_h_[k];
      d.g_right = minima_x_[k];
      const double tl = rightmost_t(d.alpha, true);
      d.g_left = tl > 0 ? -std::expm1(-tl) : 0.0;
      jumps_.push_back(d);
    }
    later = std::min(later, minima_h_[k]);
  }
  std::reverse(jumps_.begin(), jumps_.end());

  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    if (psi_[i] == 0 && i > 0) {
      psi_roots_t_.push_back(t_[i]);
    } else if ((psi_[i] > 0 && psi_[i + 1] < 0) || (psi_[i] < 0 && psi_[i + 1] > 0)) {
      psi_roots_t_.push_back(psi_root(t_[i], t_[i + 1]));
    }
  }
  for (double t : psi_roots_t_) psi_roots_.push_back(-std::expm1(-t));
}

double CurveAnalysis::h_t(double t) const { return t / dist_.pgf(-std::expm1(-t), 1); }

double CurveAnalysis::psi_t(double t) const {
  const double x = -std::expm1(-t);
  return x - t * (std::exp(-t) + dist_.pgf(x) / dist_.pgf(x, 1));
}

double CurveAnalysis::refine_extremum(double lo, double hi) const {
  // sign of h' as a function of t
  auto slope = [this](double t) {
    const double x = -std::expm1(-t);
    return std::exp(t) - t * dist_.pgf(x, 2) / dist_.pgf(x, 1);
  };
  if (sign_of(slope(lo)) * sign_of(slope(hi)) < 0) return bisect(slope, lo, hi);
  // flat or noisy bracket: fall back to golden section on -h or h
  const double mid = 0.5 * (lo + hi);
  const bool is_min = h_t(mid) <= h_t(lo);
  return golden_max([&](double t) { return is_min ? -h_t(t) : h_t(t); }, lo, hi);
}

double CurveAnalysis::crossing_t(double lo, double hi, double alpha, bool strict) const {
  auto below = [&](double t) {
    const double v = t > 0 ? h_t(t) : h0_;
    return strict ? v < alpha : v <= alpha;
  };
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (below(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double CurveAnalysis::rightmost_t(double alpha, bool strict) const {
  auto below = [&](double v) { return strict ? v < alpha : v <= alpha; };
  std::size_t i = t_.size();
  while (i > 0 && !below(h_[i - 1])) --i;
  if (i == 0) {
    if (!below(h0_)) return 0.0;
    return crossing_t(0.0, t_.front(), alpha, strict);
  }
  --i;
  if (i + 1 < t_.size()) return crossing_t(t_[i], t_[i + 1], alpha, strict);
  double hi = t_.back() * 2;
  while (below(h_t(hi)) && hi < 1e9) hi *= 2;
  return crossing_t(t_.back(), hi, alpha, strict);
}

double CurveAnalysis::psi_root(double lo, double hi) const {
  return bisect([this](double t) { return psi_t(t); }, lo, hi);
}

double CurveAnalysis::g_star(double alpha) const {
  if (alpha < 0) throw InvalidParam("alpha must be >= 0");
  const double t = rightmost_t(alpha, false);
  return t > 0 ? -std::expm1(-t) : 0.0;
}

namespace {

struct VisibleInterval {
  double alpha_start;
  double t_start;  // 0 when g* leaves 0 continuously
  double t_end;    // infinity for the last one
  bool starts_with_jump;
};

}  // namespace

std::vector<SignEvent> CurveAnalysis::sign_events() const {
  std::vector<VisibleInterval> intervals;
  if (sharp_at_zero_ && (jumps_.empty() || jumps_.front().g_left > 0 || h0_ < jumps_.front().alpha))
    intervals.push_back({h0_, 0.0, kInf, false});
  for (const auto& j : jumps_) {
    const double ts = -std::log1p(-j.g_right);
    if (!intervals.empty()) intervals.back().t_end = j.g_left > 0 ? -std::log1p(-j.g_left) : 0.0;
    intervals.push_back({j.alpha, ts, kInf, true});
  }
  std::vector<SignEvent> events;
  for (const auto& iv : intervals) {
    int s;
    if (iv.t_start > 0) {
      s = sign_of(psi_t(iv.t_start));
    } else {
      auto first = std::upper_bound(t_.begin(), t_.end(), 0.0);
      s = first == t_.end() ? 0 : sign_of(psi_t(*first));
    }
    events.push_back({iv.alpha_start, s, iv.starts_with_jump});
    for (double tr : psi_roots_t_) {
      if (tr <= iv.t_start || tr >= iv.t_end) continue;
      const double after = psi_t(tr * (1 + 1e-9) + 1e-12);
      const int s_after = sign_of(after);
      if (s_after == 0) continue;
      events.push_back({h_t(tr), s_after, false});
    }
  }
  return events;
}

std::string CurveAnalysis::sign_pattern() const {
  std::string out;
  int last = 0;
  for (const auto& e : sign_events()) {
    if (e.sign == 0 || e.sign == last) continue;
    if (!out.empty()) out += ',';
    out += e.sign > 0 ? '+' : '-';
    last = e.sign;
  }
  return out;
}

std::optional<AlphaBar> CurveAnalysis::alpha_bar() const {
  if (dist_.min_weight() < 3) return std::nullopt;
  for (const auto& e : sign_events()) {
    if (e.sign >= 0) continue;
    AlphaBar out;
    out.value = e.alpha;
    out.via_jump = e.at_jump;
    if (e.at_jump) {
      for (const auto& j : jumps_)
        if (j.alpha == e.alpha) out.x_star = j.g_right;
    } else {
      // the crossing is the root whose h value produced this event
      for (double tr : psi_roots_t_)
        if (h_t(tr) == e.alpha) {
          out.x_star = -std::expm1(-tr);
          out.transversal = std::abs(h_psi_t(dist_, tr).dpsi) > 1e-9;
        }
    }
    return out;
  }
  return std::nullopt;
}

AlphaSharp alpha_sharp(const WeightDist& dist, const ThresholdOptions& opt) {
  CurveAnalysis c(dist, opt);
  return AlphaSharp{c.alpha_sharp(), c.local_minima(), c.sharp_at_zero()};
}

double g_star(const WeightDist& dist, double alpha, const ThresholdOptions& opt) {
  return CurveAnalysis(dist, opt).g_star(alpha);
}

std::vector<Discontinuity> discontinuities(const WeightDist& dist, const ThresholdOptions& opt) {
  return CurveAnalysis(dist, opt).discontinuities();
}

std::optional<AlphaBar> alpha_bar(const WeightDist& dist, const ThresholdOptions& opt) {
  return CurveAnalysis(dist, opt).alpha_bar();
}

namespace {

template <class T>
T i_map(int r, const T& x) {
  return T(1 - exp(-x / (1 - T(r - 1) / r * x)));
}

}  // namespace

XStarIteration x_star_iteration(int r, int steps, double tol) {
  if (r < 3) throw InvalidParam("x* iteration needs r >= 3");
  PrecisionScope scope(kDefaultPrecisionBits);
  BigReal a = BigReal(r - 2) / (r - 1), b(1);
  XStarIteration out;
  out.lower.push_back(to_double(a));
  out.upper.push_back(to_double(b));
  for (int n = 0; n < steps; ++n) {
    if (to_double(BigReal(b - a)) < tol) break;
    BigReal a2 = i_map(r, a), b2 = i_map(r, b);
    if (!(a2 > a) || !(b2 < b) || !(a2 <= b2)) out.monotone = false;
    a = a2;
    b = b2;
    out.lower.push_back(to_double(a));
    out.upper.push_back(to_double(b));
  }
  out.gap = to_double(BigReal(b - a));
  if (out.gap >= tol) throw NoConvergence("x* iteration did not close the gap in " + std::to_string(steps) + " steps");
  out.x_star = to_double(BigReal((a + b) / 2));
  return out;
}

BigReal x_star_big(int r, unsigned bits) {
  if (r < 3) throw InvalidParam("x* iteration needs r >= 3");
  PrecisionScope scope(bits);
  BigReal a = BigReal(r - 2) / (r - 1), b(1);
  const BigReal tol = ldexp(BigReal(1), -static_cast<int>(bits) + 16);
  for (int n = 0; n < 1000000 && b - a > tol; ++n) {
    a = i_map(r, a);
    b = i_map(r, b);
  }
  if (b - a > tol) throw NoConvergence("x* iteration did not converge");
  return (a + b) / 2;
}

CoreTheory core_theory(const CurveAnalysis& curves, double alpha, int max_degree) {
  const WeightDist& dist = curves.dist();
  CoreTheory out;
  out.alpha = alpha;
  out.g_star = curves.g_star(alpha);
  for (const auto& j : curves.discontinuities())
    if (std::abs(j.alpha - alpha) < 1e-9) out.at_discontinuity = true;
  out.mu = alpha * dist.pgf(1.0, 1);
  const double g = out.g_star;
  out.degree_pmf.assign(static_cast<std::size_t>(std::max(2, max_degree)) + 1, 0.0);
  if (g <= 0) {
    out.degree_pmf[0] = 1;
    return out;
  }
  out.nu = alpha * dist.pgf(g, 1);
  out.core_row_frac = alpha * dist.pgf(g);
  out.occupied_col_frac = -std::expm1(-out.nu) - out.nu * std::exp(-out.nu);
  out.incidence_frac = -g * std::log1p(-g);
  out.aspect_sign = sign_of(h_psi(dist, g).psi);
  double p = std::exp(-out.nu);
  out.degree_pmf[0] = p * (1 + out.nu);
  for (int d = 1; d <= max_degree; ++d) {
    p *= out.nu / d;
    if (d >= 2) out.degree_pmf[d] = p;
  }
  return out;
}

CoreTheory core_theory(const WeightDist& dist, double alpha, const ThresholdOptions& opt) {
  return core_theory(CurveAnalysis(dist, opt), alpha);
}

std::vector<AsymptoticsRow> threshold_asymptotics(int r_max, unsigned bits) {
  if (r_max < 3 || r_max > 16) throw InvalidParam("r_max must lie in 3..16");
  std::vector<AsymptoticsRow> rows;
  for (int r = 3; r <= r_max; ++r) {
    AsymptoticsRow row;
    row.r = r;
    row.alpha_star = alpha_star_lambda_big(r, bits);
    const BigReal x = x_star_big(r, bits);
    PrecisionScope scope(bits);
    row.alpha_bar = -log(1 - x) / (r * ipow(x, static_cast<unsigned long>(r - 1)));
    const BigReal er = exp(BigReal(r));
    row.star_scaled = to_double(BigReal((1 - row.alpha_star) * er * log(BigReal(2))));
    row.bar_scaled = to_double(BigReal((1 - row.alpha_bar) * er));
    rows.push_back(row);
  }
  return rows;
}

ThresholdReport threshold_report(const WeightDist& dist, std::optional<double> witness_alpha,
                                 const ThresholdOptions& opt) {
  ThresholdReport rep;
  rep.dist = dist;
  rep.options = opt;
  CurveAnalysis curves(dist, opt);
  rep.alpha_sharp = curves.alpha_sharp();
  rep.sharp_at_zero = curves.sharp_at_zero();
  rep.alpha_star = alpha_star(dist, opt);
  rep.alpha_bar = curves.alpha_bar();
  if (dist.is_point_mass() && dist.min_weight() >= 3) rep.x_star_fixed = x_star_iteration(dist.min_weight());
  rep.discontinuities = curves.discontinuities();
  rep.psi_roots = curves.psi_roots();
  rep.sign_events = curves.sign_events();
  rep.sign_pattern = curves.sign_pattern();
  rep.witness_alpha = witness_alpha.value_or(rep.alpha_star.value);
  rep.witness = F_of_alpha(dist, rep.witness_alpha, opt);
  return rep;
}

}  // namespace sparsegf2
