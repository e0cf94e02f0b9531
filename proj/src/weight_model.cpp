#include "sparsegf2/weight_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

namespace {

// k!/(k-d)!
long falling(int k, int d) {
  long out = 1;
  for (int i = 0; i < d; ++i) out *= (k - i);
  return out;
}

void check_order(int order) {
  if (order < 0 || order > 3) throw InvalidParam("pgf order must be in 0..3");
}

template <class T, class Coef>
T pgf_impl(const std::vector<WeightAtom>& atoms, const T& s, int order, Coef coef) {
  check_order(order);
  T acc(0);
  for (const auto& a : atoms) {
    if (a.k < order) continue;
    acc += coef(a) * T(falling(a.k, order)) * ipow(T(s), static_cast<unsigned long>(a.k - order));
  }
  return acc;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int parse_weight(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ParseError("empty weight in rho spec");
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(t, &used);
  } catch (const std::exception&) {
    throw ParseError("bad weight '" + t + "' in rho spec");
  }
  if (used != t.size()) throw ParseError("bad weight '" + t + "' in rho spec");
  if (v < 1) throw InvalidDistribution("weights must be >= 1, got " + t);
  if (v > 100000) throw InvalidDistribution("weight " + t + " is too large");
  return static_cast<int>(v);
}

}  // namespace

WeightDist::WeightDist(std::vector<std::pair<int, Rational>> atoms, bool normalize) {
  if (atoms.empty()) throw InvalidDistribution("weight law has no atoms");
  std::sort(atoms.begin(), atoms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Rational total(0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].first < 1) throw InvalidDistribution("weights must be >= 1");
    if (atoms[i].second <= 0) throw InvalidDistribution("probabilities must be > 0");
    if (i > 0 && atoms[i].first == atoms[i - 1].first)
      throw InvalidDistribution("duplicate weight " + std::to_string(atoms[i].first));
    total += atoms[i].second;
  }
  if (std::abs(to_double(total) - 1.0) > 1e-9)
    throw InvalidDistribution("probabilities sum to " + std::to_string(to_double(total)));
  if (!normalize && total != 1) throw InvalidDistribution("probabilities do not sum to 1 exactly");
  for (auto& [k, p] : atoms) {
    Rational q = p / total;
    atoms_.push_back(WeightAtom{k, to_double(q), q});
  }
}

WeightDist WeightDist::point_mass(int k) { return WeightDist({{k, Rational(1)}}); }

double WeightDist::prob(int k) const {
  for (const auto& a : atoms_)
    if (a.k == k) return a.p;
  return 0.0;
}

Rational WeightDist::prob_exact(int k) const {
  for (const auto& a : atoms_)
    if (a.k == k) return a.exact;
  return Rational(0);
}

double WeightDist::mean() const {
  double m = 0;
  for (const auto& a : atoms_) m += a.k * a.p;
  return m;
}

double WeightDist::pgf(double s, int order) const {
  check_order(order);
  double acc = 0;
  for (const auto& a : atoms_) {
    if (a.k < order) continue;
    acc += a.p * static_cast<double>(falling(a.k, order)) * std::pow(s, a.k - order);
  }
  return acc;
}

BigReal WeightDist::pgf(const BigReal& s, int order) const {
  return pgf_impl(atoms_, s, order, [](const WeightAtom& a) { return to_bigreal(a.exact); });
}

Rational WeightDist::pgf(const Rational& s, int order) const {
  return pgf_impl(atoms_, s, order, [](const WeightAtom& a) { return a.exact; });
}

std::string WeightDist::to_spec() const {
  if (is_point_mass()) return "r=" + std::to_string(atoms_[0].k);
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (i) os << ',';
    if (boost::multiprecision::denominator(atoms_[i].exact) == 1 ||
        atoms_[i].exact.str().size() < 40)
      os << atoms_[i].exact.str();
    else
      os << atoms_[i].p;
    os << ':' << atoms_[i].k;
  }
  return os.str();
}

double SizeBiasedPGFs::eval(double s) const {
  double acc = 0;
  for (const auto& [w, c] : sigma_coeffs) acc += c * std::pow(s, w);
  return acc;
}

SizeBiasedPGFs size_biased(const WeightDist& dist) {
  SizeBiasedPGFs out;
  out.mean_weight = dist.mean();
  for (const auto& a : dist.atoms())
    out.sigma_coeffs.emplace_back(a.k - 1, a.k * a.p / out.mean_weight);
  return out;
}

WeightDist parse_rho(const std::string& spec_in) {
  const std::string spec = trim(spec_in);
  if (spec.empty()) throw ParseError("empty rho spec");
  if (spec.size() > 2 && (spec[0] == 'r' || spec[0] == 'R') && trim(spec.substr(1)).front() == '=') {
    std::string rest = trim(spec.substr(1));
    return WeightDist::point_mass(parse_weight(rest.substr(1)));
  }
  std::vector<std::pair<int, Rational>> atoms;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto colon = token.find(':');
    if (colon == std::string::npos) throw ParseError("expected p:k, got '" + trim(token) + "'");
    Rational p = parse_decimal_rational(token.substr(0, colon));
    int k = parse_weight(token.substr(colon + 1));
    atoms.emplace_back(k, p);
  }
  if (spec.back() == ',') throw ParseError("trailing comma in rho spec");
  return WeightDist(std::move(atoms));
}

void to_json(nlohmann::json& j, const WeightDist& dist) {
  j = nlohmann::json::object();
  auto arr = nlohmann::json::array();
  for (const auto& a : dist.atoms())
    arr.push_back({{"k", a.k}, {"p", a.p}, {"p_exact", a.exact.str()}});
  j["atoms"] = arr;
}

void from_json(const nlohmann::json& j, WeightDist& dist) {
  std::vector<std::pair<int, Rational>> atoms;
  for (const auto& a : j.at("atoms")) {
    Rational p = a.contains("p_exact") ? Rational(a.at("p_exact").get<std::string>())
                                       : parse_decimal_rational(a.at("p").dump());
    atoms.emplace_back(a.at("k").get<int>(), p);
  }
  dist = WeightDist(std::move(atoms));
}

int draw_weight(const WeightDist& dist, Xoshiro256& rng) {
  const auto& atoms = dist.atoms();
  if (atoms.size() == 1) return atoms[0].k;
  double u = rng.uniform01();
  for (const auto& a : atoms) {
    if (u < a.p) return a.k;
    u -= a.p;
  }
  return atoms.back().k;
}

int sample_weight_exact(const WeightDist& dist, int n, Xoshiro256& rng) {
  return std::min(draw_weight(dist, rng), n);
}

std::vector<std::uint32_t> odd_urns(int balls, int n, Xoshiro256& rng) {
  std::vector<std::uint32_t> hits(static_cast<std::size_t>(balls));
  for (auto& h : hits) h = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(n)));
  std::sort(hits.begin(), hits.end());
  std::vector<std::uint32_t> out;
  std::size_t i = 0;
  while (i < hits.size()) {
    std::size_t j = i;
    while (j < hits.size() && hits[j] == hits[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(hits[i]);
    i = j;
  }
  return out;
}

int sample_weight_binomial(const WeightDist& dist, int n, Xoshiro256& rng) {
  if (n < 1) throw InvalidParam("n must be >= 1");
  return static_cast<int>(odd_urns(draw_weight(dist, rng), n, rng).size());
}

WeightLaw exact_model_law(const WeightDist& dist, int n) {
  if (n < 1) throw InvalidParam("n must be >= 1");
  std::vector<Rational> mass(static_cast<std::size_t>(n) + 1);
  for (const auto& a : dist.atoms()) mass[std::min(a.k, n)] += a.exact;
  WeightLaw out;
  for (int w = 1; w <= n; ++w)
    if (mass[w] != 0) out.emplace_back(w, mass[w]);
  return out;
}

WeightLaw binomial_model_law(const WeightDist& dist, int n) {
  if (n < 1) throw InvalidParam("n must be >= 1");
  // state[j] = Pr[j odd urns] after the balls thrown so far
  std::vector<Rational> state(static_cast<std::size_t>(n) + 1), total(state.size());
  state[0] = 1;
  int thrown = 0;
  for (const auto& a : dist.atoms()) {
    for (; thrown < a.k; ++thrown) {
      std::vector<Rational> next(state.size());
      for (int j = 0; j <= n; ++j) {
        if (state[j] == 0) continue;
        if (j > 0) next[j - 1] += state[j] * Rational(j, n);
        if (j < n) next[j + 1] += state[j] * Rational(n - j, n);
      }
      state.swap(next);
    }
    for (int j = 0; j <= n; ++j) total[j] += a.exact * state[j];
  }
  WeightLaw out;
  for (int j = 0; j <= n; ++j)
    if (total[j] != 0) out.emplace_back(j, total[j]);
  return out;
}

}  // namespace sparsegf2
