#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sparsegf2/bigreal.hpp"
#include "sparsegf2/rng.hpp"

namespace sparsegf2 {

struct WeightAtom {
  int k = 0;
  double p = 0.0;
  Rational exact;  // p held exactly; `p` is its double rounding
};

// A law on row weights {1, 2, ..., max_weight}. Probabilities are kept both as
// doubles and as exact rationals, so callers can pick speed or exactness.
class WeightDist {
 public:
  WeightDist() = default;
  // Atoms may come in any order; they are sorted. Throws InvalidDistribution.
  explicit WeightDist(std::vector<std::pair<int, Rational>> atoms, bool normalize = true);

  static WeightDist point_mass(int k);

  const std::vector<WeightAtom>& atoms() const { return atoms_; }
  int min_weight() const { return atoms_.front().k; }
  int max_weight() const { return atoms_.back().k; }
  bool is_point_mass() const { return atoms_.size() == 1; }
  double prob(int k) const;
  Rational prob_exact(int k) const;
  double mean() const;  // rho'(1)

  // d-th derivative of the pgf at s, d in 0..3.
  double pgf(double s, int order = 0) const;
  BigReal pgf(const BigReal& s, int order = 0) const;
  Rational pgf(const Rational& s, int order = 0) const;

  // Canonical text form, accepted back by parse_rho.
  std::string to_spec() const;

 private:
  std::vector<WeightAtom> atoms_;
};

// Law of the weight seen from a uniformly chosen incidence, minus the chosen
// vertex itself: sigma(s) = rho'(s) / rho'(1).
struct SizeBiasedPGFs {
  std::vector<std::pair<int, double>> sigma_coeffs;  // (w, sigma_w)
  double mean_weight = 0.0;
  double eval(double s) const;
};
SizeBiasedPGFs size_biased(const WeightDist& dist);

// "r=K" or "p1:k1,p2:k2,...". Throws ParseError / InvalidDistribution.
WeightDist parse_rho(const std::string& spec);

void to_json(nlohmann::json& j, const WeightDist& dist);
void from_json(const nlohmann::json& j, WeightDist& dist);

// Weight of one row of M(n, .) in the exact model: W truncated at n.
int sample_weight_exact(const WeightDist& dist, int n, Xoshiro256& rng);

// Odd urns (sorted) after throwing `balls` balls uniformly into n urns.
std::vector<std::uint32_t> odd_urns(int balls, int n, Xoshiro256& rng);

// Number of odd urns after throwing W ~ dist balls into n urns; may be 0.
int sample_weight_binomial(const WeightDist& dist, int n, Xoshiro256& rng);

// Draw a raw weight from dist (no truncation).
int draw_weight(const WeightDist& dist, Xoshiro256& rng);

using WeightLaw = std::vector<std::pair<int, Rational>>;  // (weight, probability)

// Per-n laws of the row weight, exact. The binomial law may include weight 0.
WeightLaw exact_model_law(const WeightDist& dist, int n);
WeightLaw binomial_model_law(const WeightDist& dist, int n);

}  // namespace sparsegf2
