#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "sparsegf2/bigreal.hpp"
#include "sparsegf2/sampler.hpp"
#include "sparsegf2/weight_model.hpp"

namespace sparsegf2 {

// Precision policy for the alternating sums. A result is accepted once the
// rounding bound is below rel_tol of its magnitude; otherwise the precision is
// doubled, up to max_bits (then PrecisionLoss).
struct PrecisionPolicy {
  unsigned bits = kDefaultPrecisionBits;
  unsigned max_bits = 1u << 16;
  double rel_tol = 1e-15;
};

struct BigResult {
  BigReal value;
  unsigned bits_used = 0;
  bool exact_zero = false;  // zero for a structural (parity) reason
};

// Probability that all n urn counts are even when m rows are thrown by the
// ball-and-urn scheme with W ~ dist balls each (empty rows kept).
BigResult pi_multinomial(long n, long m, const WeightDist& dist, const PrecisionPolicy& pol = {});
Rational pi_multinomial_exact(long n, long m, const WeightDist& dist);

// Probability that m i.i.d. rows, each with weight drawn from `law` and uniform
// support of that weight, sum to zero mod 2. Weight 0 is allowed in `law`.
BigResult prob_A_general(long n, long m, const WeightLaw& law, const PrecisionPolicy& pol = {});
Rational prob_A_exact(long n, long m, const WeightLaw& law);

// Row-weight law used by the exact formulas for a given model: W truncated at n
// for the exact model, the odd-urn count (weight 0 included) for the binomial one.
WeightLaw model_law(const WeightDist& dist, long n, WeightModel model);

struct NullCountExpectation {
  BigReal total;
  std::vector<BigReal> profile;  // profile[l] = E[# null vectors with l rows]
  unsigned bits_used = 0;
};
struct NullCountExact {
  Rational total;
  std::vector<Rational> profile;
};

// E[number of null vectors of M(n,m)], zero vector included.
NullCountExpectation expected_null_count(long n, long m, const WeightDist& dist, WeightModel model,
                                         bool with_profile = true, const PrecisionPolicy& pol = {});
NullCountExact expected_null_count_exact(long n, long m, const WeightDist& dist, WeightModel model);

struct PoissonCheck {
  BigReal lhs;
  BigReal rhs;
  long truncation = 0;
};

// Compares the all-even probability for single balls with its Poisson
// representation (ratio of sum probabilities times the all-even factor).
PoissonCheck poissonization_check(long n, long m, double mu, std::optional<long> truncation = std::nullopt,
                                  unsigned bits = kDefaultPrecisionBits);

// k indicator events per trial; cell g (bitmask over the k events) has
// probability p_g. Asks for Pr[count_i = t_i mod r for all i] after n trials.
struct ParitySpec {
  int k = 1;
  int r = 2;
  std::vector<int> targets;
  std::vector<double> cell_probs;        // size 2^k
  std::vector<Rational> cell_probs_exact;  // optional, size 2^k
};

double multinomial_parity(const ParitySpec& spec, long n);
// Same sum evaluated exactly in the cyclotomic field; needs cell_probs_exact.
Rational multinomial_parity_exact(const ParitySpec& spec, long n);

struct GFqSurvival {
  double value = 0;
  std::optional<double> lower_bound;
};

// Dense model over GF(q) with uniform nonzero rows. Without n: limiting
// Pr[T_n > n+1-r]. With n: the exact finite-n value.
GFqSurvival gfq_dense_survival(long q, long r, std::optional<long> n = std::nullopt);

}  // namespace sparsegf2
