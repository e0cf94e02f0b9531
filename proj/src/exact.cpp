#include "sparsegf2/exact.hpp"

#include <cmath>
#include <functional>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

namespace {

// Small instances are summed exactly; this also catches zeros that are not
// visible from weight parities.
constexpr long kExactMaxN = 48;
constexpr long kExactMaxM = 64;

bool all_weights_odd(const WeightLaw& law) {
  for (const auto& [w, p] : law)
    if (p != 0 && w % 2 == 0) return false;
  return true;
}

bool has_zero_weight(const WeightLaw& law) {
  for (const auto& [w, p] : law)
    if (w == 0 && p != 0) return true;
  return false;
}

// 2^-n * sum_j C(n,j) c_j^m in exact arithmetic.
Rational parity_sum_exact(long n, long m, const std::vector<Rational>& c) {
  Rational acc(0);
  BigInt binom(1);
  for (long j = 0; j <= n; ++j) {
    acc += Rational(binom) * ipow(c[static_cast<std::size_t>(j)], static_cast<unsigned long>(m));
    binom = binom * (n - j) / (j + 1);
  }
  return acc / Rational(ipow(BigInt(2), static_cast<unsigned long>(n)));
}

// Same sum in BigReal with a running bound on rounding error; precision is
// doubled until the bound is small relative to the result.
BigResult parity_sum_big(long n, long m, const std::vector<Rational>& c, const PrecisionPolicy& pol,
                         bool nonnegative_terms) {
  for (unsigned bits = pol.bits;; bits *= 2) {
    PrecisionScope scope(bits);
    BigReal sum(0), abs_sum(0), binom(1);
    for (long j = 0; j <= n; ++j) {
      BigReal term = binom * ipow(to_bigreal(c[static_cast<std::size_t>(j)]), static_cast<unsigned long>(m));
      sum += term;
      abs_sum += abs(term);
      binom = binom * (n - j) / (j + 1);
    }
    sum = ldexp(sum, static_cast<int>(-n));
    abs_sum = ldexp(abs_sum, static_cast<int>(-n));
    BigReal bound = abs_sum * BigReal(2 * m + 4 * n + 32) * ldexp(BigReal(1), -static_cast<int>(bits));
    if (nonnegative_terms || bound <= BigReal(pol.rel_tol) * abs(sum))
      return BigResult{sum, bits, false};
    if (bits * 2 > pol.max_bits)
      throw PrecisionLoss("alternating sum not resolved at " + std::to_string(bits) +
                          " bits (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  }
}

// E[(-1)^{|X & J|}] for |J| = j, mixed over the row-weight law.
std::vector<Rational> law_signs(long n, const WeightLaw& law) {
  for (const auto& [w, p] : law)
    if (w < 0 || w > n) throw InvalidParam("weight law must be supported on [0, n]");
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) {
    const BigInt cj = binomial(n, j);
    Rational acc(0);
    for (const auto& [w, p] : law) {
      // sum over overlap sizes i of (-1)^i C(w,i) C(n-w, j-i), divided by C(n,j)
      BigInt s(0);
      for (long i = 0; i <= w && i <= j; ++i) {
        BigInt t = binomial(w, i) * binomial(n - w, j - i);
        if (i % 2) s -= t; else s += t;
      }
      acc += p * Rational(s, cj);
    }
    c[static_cast<std::size_t>(j)] = acc;
  }
  return c;
}

std::vector<Rational> pgf_signs(long n, const WeightDist& dist) {
  std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
  for (long j = 0; j <= n; ++j) c[static_cast<std::size_t>(j)] = dist.pgf(Rational(n - 2 * j, n));
  return c;
}

WeightLaw dist_as_law(const WeightDist& dist) {
  WeightLaw law;
  for (const auto& a : dist.atoms()) law.emplace_back(a.k, a.exact);
  return law;
}

void check_nm(long n, long m) {
  if (n < 1) throw InvalidParam("n must be >= 1");
  if (m < 0) throw InvalidParam("m must be >= 0");
}

BigResult structural_zero() {
  return BigResult{BigReal(0), 0, true};
}

BigResult parity_probability(long n, long m, const std::vector<Rational>& c, const WeightLaw& law,
                             const PrecisionPolicy& pol) {
  if (m % 2 == 1 && all_weights_odd(law)) return structural_zero();
  if (m == 1 && !has_zero_weight(law)) return structural_zero();
  if (n <= kExactMaxN && m <= kExactMaxM) {
    PrecisionScope scope(pol.bits);
    Rational q = parity_sum_exact(n, m, c);
    return BigResult{to_bigreal(q), pol.bits, q == 0};
  }
  return parity_sum_big(n, m, c, pol, m % 2 == 0);
}

}  // namespace

BigResult pi_multinomial(long n, long m, const WeightDist& dist, const PrecisionPolicy& pol) {
  check_nm(n, m);
  auto law = dist_as_law(dist);
  law.emplace_back(0, Rational(0));  // empty rows can occur, so m = 1 is not a structural zero
  if (m % 2 == 1 && all_weights_odd(law)) return structural_zero();
  auto c = pgf_signs(n, dist);
  if (n <= kExactMaxN && m <= kExactMaxM) {
    PrecisionScope scope(pol.bits);
    Rational q = parity_sum_exact(n, m, c);
    return BigResult{to_bigreal(q), pol.bits, q == 0};
  }
  return parity_sum_big(n, m, c, pol, m % 2 == 0);
}

Rational pi_multinomial_exact(long n, long m, const WeightDist& dist) {
  check_nm(n, m);
  return parity_sum_exact(n, m, pgf_signs(n, dist));
}

BigResult prob_A_general(long n, long m, const WeightLaw& law, const PrecisionPolicy& pol) {
  check_nm(n, m);
  return parity_probability(n, m, law_signs(n, law), law, pol);
}

Rational prob_A_exact(long n, long m, const WeightLaw& law) {
  check_nm(n, m);
  return parity_sum_exact(n, m, law_signs(n, law));
}

WeightLaw model_law(const WeightDist& dist, long n, WeightModel model) {
  if (n < 1) throw InvalidParam("n must be >= 1");
  return model == WeightModel::exact ? exact_model_law(dist, static_cast<int>(n))
                                     : binomial_model_law(dist, static_cast<int>(n));
}

NullCountExpectation expected_null_count(long n, long m, const WeightDist& dist, WeightModel model,
                                         bool with_profile, const PrecisionPolicy& pol) {
  check_nm(n, m);
  const WeightLaw law = model_law(dist, n, model);
  const auto c = law_signs(n, law);
  NullCountExpectation out;
  // Summing over all subsets of rows turns c^l into (1 + c)^m; every term is
  // nonnegative, so the total needs no precision escalation.
  std::vector<Rational> shifted(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) shifted[j] = 1 + c[j];
  auto total = parity_sum_big(n, m, shifted, pol, true);
  out.bits_used = total.bits_used;
  out.total = total.value;
  if (with_profile) {
    out.profile.reserve(static_cast<std::size_t>(m) + 1);
    for (long l = 0; l <= m; ++l) {
      auto p = parity_probability(n, l, c, law, pol);
      PrecisionScope scope(std::max(p.bits_used, pol.bits));
      out.profile.push_back(BigReal(binomial(m, l)) * p.value);
      out.bits_used = std::max(out.bits_used, p.bits_used);
    }
  }
  return out;
}

NullCountExact expected_null_count_exact(long n, long m, const WeightDist& dist, WeightModel model) {
  check_nm(n, m);
  const auto c = law_signs(n, model_law(dist, n, model));
  NullCountExact out;
  out.total = 0;
  for (long l = 0; l <= m; ++l) {
    out.profile.push_back(Rational(binomial(m, l)) * parity_sum_exact(n, l, c));
    out.total += out.profile.back();
  }
  return out;
}

PoissonCheck poissonization_check(long n, long m, double mu, std::optional<long> truncation, unsigned bits) {
  check_nm(n, m);
  if (!(mu > 0)) throw InvalidParam("mu must be positive");
  PoissonCheck out;
  out.lhs = pi_multinomial(n, m, WeightDist::point_mass(1), PrecisionPolicy{bits}).value;
  PrecisionScope scope(bits);
  const long trunc = truncation.value_or(static_cast<long>(std::ceil(mu + 40 * std::sqrt(mu) + 10)));
  if (trunc < 0) throw InvalidParam("truncation must be >= 0");
  // Values above m cannot contribute to a sum equal to m.
  const long support = std::min(trunc, m);
  const BigReal bmu(mu);
  std::vector<BigReal> pois(static_cast<std::size_t>(support) + 1);
  pois[0] = exp(-bmu);
  for (long z = 1; z <= support; ++z) pois[z] = pois[z - 1] * bmu / z;
  if (support < m) {
    BigReal head(0);
    for (const auto& p : pois) head += p;
    if (BigReal(1) - head > BigReal(1e-20))
      throw TruncationTooSmall("Poisson tail beyond " + std::to_string(support) + " exceeds 1e-20");
  }
  out.truncation = support;
  const BigReal even_mass = exp(-bmu) * cosh(bmu);
  std::vector<BigReal> even(pois.size());
  for (long z = 0; z <= support; z += 2) even[z] = pois[z] / even_mass;

  auto nfold_at_m = [&](const std::vector<BigReal>& pmf) {
    std::vector<BigReal> acc(static_cast<std::size_t>(m) + 1, BigReal(0));
    acc[0] = 1;
    for (long i = 0; i < n; ++i) {
      std::vector<BigReal> next(acc.size(), BigReal(0));
      for (long a = 0; a <= m; ++a) {
        if (acc[a] == 0) continue;
        for (long z = 0; z <= support && a + z <= m; ++z)
          if (pmf[z] != 0) next[a + z] += acc[a] * pmf[z];
      }
      acc.swap(next);
    }
    return acc[static_cast<std::size_t>(m)];
  };
  const BigReal num = nfold_at_m(even);
  const BigReal den = nfold_at_m(pois);
  out.rhs = num / den * ipow(BigReal((1 + exp(-2 * bmu)) / 2), static_cast<unsigned long>(n));
  return out;
}

namespace {

void check_parity_spec(const ParitySpec& spec, long n, bool exact) {
  if (spec.k < 1 || spec.k > 10) throw InvalidParam("parity spec needs 1 <= k <= 10");
  if (spec.r < 2 || spec.r > 8) throw InvalidParam("parity spec needs 2 <= r <= 8");
  if (n < 0) throw InvalidParam("n must be >= 0");
  if (static_cast<int>(spec.targets.size()) != spec.k) throw DimensionMismatch("need k targets");
  for (int t : spec.targets)
    if (t < 0 || t >= spec.r) throw InvalidParam("targets must lie in 0..r-1");
  const std::size_t cells = std::size_t{1} << spec.k;
  if (exact) {
    if (spec.cell_probs_exact.size() != cells) throw DimensionMismatch("need 2^k exact cell probabilities");
    Rational s(0);
    for (const auto& p : spec.cell_probs_exact) {
      if (p < 0) throw InvalidParam("cell probabilities must be nonnegative");
      s += p;
    }
    if (s != 1) throw InvalidParam("cell probabilities must sum to 1");
  } else {
    if (spec.cell_probs.size() != cells) throw DimensionMismatch("need 2^k cell probabilities");
    double s = 0;
    for (double p : spec.cell_probs) {
      if (p < 0) throw InvalidParam("cell probabilities must be nonnegative");
      s += p;
    }
    if (std::abs(s - 1) > 1e-12) throw InvalidParam("cell probabilities must sum to 1");
  }
}

// Walk all h in {0..r-1}^k, calling f(h) with the vector h.
void for_each_h(int k, int r, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> h(static_cast<std::size_t>(k), 0);
  for (;;) {
    f(h);
    int i = 0;
    while (i < k && ++h[i] == r) h[i++] = 0;
    if (i == k) return;
  }
}

int dot_mod(const std::vector<int>& h, std::size_t g, int r) {
  int s = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if ((g >> i) & 1U) s += h[i];
  return s % r;
}

using Poly = std::vector<long>;  // integer coefficients, lowest degree first

Poly cyclotomic(int r) {
  Poly num(static_cast<std::size_t>(r) + 1, 0);
  num[0] = -1;
  num[r] = 1;
  for (int d = 1; d < r; ++d) {
    if (r % d) continue;
    Poly den = cyclotomic(d);
    // exact division by a monic polynomial
    Poly q(num.size() - den.size() + 1, 0);
    for (std::size_t i = q.size(); i-- > 0;) {
      q[i] = num[i + den.size() - 1];
      for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= q[i] * den[j];
    }
    num = q;
  }
  return num;
}

}  // namespace

double multinomial_parity(const ParitySpec& spec, long n) {
  check_parity_spec(spec, n, false);
  const std::size_t cells = std::size_t{1} << spec.k;
  const double two_pi = 2 * std::acos(-1.0);
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(spec.r));
  for (int e = 0; e < spec.r; ++e) roots[e] = std::polar(1.0, two_pi * e / spec.r);
  std::complex<double> acc(0, 0);
  for_each_h(spec.k, spec.r, [&](const std::vector<int>& h) {
    std::complex<double> inner(0, 0);
    for (std::size_t g = 0; g < cells; ++g) inner += roots[dot_mod(h, g, spec.r)] * spec.cell_probs[g];
    int th = 0;
    for (int i = 0; i < spec.k; ++i) th += spec.targets[i] * h[i];
    th %= spec.r;
    acc += roots[(spec.r - th) % spec.r] * std::pow(inner, static_cast<double>(n));
  });
  acc /= std::pow(static_cast<double>(spec.r), spec.k);
  if (std::abs(acc.imag()) > 1e-12)
    throw NumericalResidue("imaginary residue " + std::to_string(acc.imag()) + " in parity sum");
  return acc.real();
}

Rational multinomial_parity_exact(const ParitySpec& spec, long n) {
  check_parity_spec(spec, n, true);
  const int r = spec.r;
  const std::size_t cells = std::size_t{1} << spec.k;
  using Elem = std::vector<Rational>;  // element of Q[x]/(x^r - 1)
  auto mul = [r](const Elem& a, const Elem& b) {
    Elem c(static_cast<std::size_t>(r), Rational(0));
    for (int i = 0; i < r; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < r; ++j) c[(i + j) % r] += a[i] * b[j];
    }
    return c;
  };
  Elem acc(static_cast<std::size_t>(r), Rational(0));
  for_each_h(spec.k, r, [&](const std::vector<int>& h) {
    Elem inner(static_cast<std::size_t>(r), Rational(0));
    for (std::size_t g = 0; g < cells; ++g) inner[dot_mod(h, g, r)] += spec.cell_probs_exact[g];
    Elem power(static_cast<std::size_t>(r), Rational(0));
    power[0] = 1;
    for (long e = n; e > 0; e >>= 1) {
      if (e & 1) power = mul(power, inner);
      if (e > 1) inner = mul(inner, inner);
    }
    int th = 0;
    for (int i = 0; i < spec.k; ++i) th += spec.targets[i] * h[i];
    th %= r;
    for (int i = 0; i < r; ++i) acc[(i + r - th) % r] += power[i];
  });
  // Evaluate at a primitive r-th root of unity: reduce modulo the cyclotomic
  // polynomial; a probability must leave only the constant term.
  const Poly phi = cyclotomic(r);
  const std::size_t deg = phi.size() - 1;
  for (std::size_t i = acc.size(); i-- > deg;) {
    const Rational lead = acc[i];
    if (lead == 0) continue;
    for (std::size_t j = 0; j <= deg; ++j) acc[i - deg + j] -= lead * Rational(phi[j]);
  }
  for (std::size_t i = 1; i < deg; ++i)
    if (acc[i] != 0) throw NumericalResidue("parity sum is not rational; check the cell probabilities");
  return acc[0] / Rational(ipow(BigInt(r), static_cast<unsigned long>(spec.k)));
}

namespace {

bool is_prime_power(long q) {
  if (q < 2) return false;
  long p = 2;
  while (p * p <= q && q % p) ++p;
  if (q % p) return true;  // q itself prime
  while (q % p == 0) q /= p;
  return q == 1;
}

}  // namespace

GFqSurvival gfq_dense_survival(long q, long r, std::optional<long> n) {
  if (!is_prime_power(q)) throw InvalidParam("q must be a prime power >= 2");
  if (r < 0) throw InvalidParam("r must be >= 0");
  GFqSurvival out;
  const double qd = static_cast<double>(q);
  if (r >= 1)
    out.lower_bound = q == 2 ? std::exp(-(4.0 / 3.0) * std::pow(2.0, 1.0 - static_cast<double>(r)))
                             : std::exp(-std::pow(qd, 1.0 - static_cast<double>(r)));
  if (n) {
    if (r < 1 || r > *n) throw InvalidParam("finite-n survival needs 1 <= r <= n");
    double v = std::pow(1 - std::pow(qd, -static_cast<double>(*n)), static_cast<double>(r - *n));
    for (long j = r; j < *n; ++j) v *= 1 - std::pow(qd, -static_cast<double>(j));
    out.value = v;
    return out;
  }
  if (r == 0) {
    out.value = 0;
    return out;
  }
  double v = 1;
  for (long j = r;; ++j) {
    const double t = std::pow(qd, -static_cast<double>(j));
    v *= 1 - t;
    if (t < 1e-18) break;
  }
  out.value = v;
  return out;
}

}  // namespace sparsegf2
