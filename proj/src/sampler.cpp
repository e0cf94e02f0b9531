#include "sparsegf2/sampler.hpp"

#include <algorithm>
#include <unordered_set>

#include "sparsegf2/errors.hpp"

namespace sparsegf2 {

WeightModel parse_model(const std::string& name) {
  if (name == "exact") return WeightModel::exact;
  if (name == "binomial") return WeightModel::binomial;
  throw ParseError("unknown weight model '" + name + "' (expected exact or binomial)");
}

std::string model_name(WeightModel model) {
  return model == WeightModel::exact ? "exact" : "binomial";
}

std::vector<std::uint32_t> sample_subset(int k, int n, Xoshiro256& rng) {
  if (k < 0 || k > n) throw InvalidParam("subset size out of range");
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k <= 16) {
    // linear membership test beats hashing for the usual small weights
    for (int j = n - k; j < n; ++j) {
      auto t = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
      if (std::find(out.begin(), out.end(), t) != out.end()) t = static_cast<std::uint32_t>(j);
      out.push_back(t);
    }
  } else {
    std::unordered_set<std::uint32_t> seen;
    for (int j = n - k; j < n; ++j) {
      auto t = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(j) + 1));
      if (!seen.insert(t).second) {
        t = static_cast<std::uint32_t>(j);
        seen.insert(t);
      }
      out.push_back(t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> sample_row(const SampleConfig& cfg, Xoshiro256& rng) {
  if (cfg.n < 1) throw InvalidParam("n must be >= 1");
  if (cfg.model == WeightModel::exact)
    return sample_subset(sample_weight_exact(cfg.dist, cfg.n, rng), cfg.n, rng);
  for (;;) {
    auto row = odd_urns(draw_weight(cfg.dist, rng), cfg.n, rng);
    if (!row.empty()) return row;
  }
}

std::vector<std::vector<std::uint32_t>> sample_rows(const SampleConfig& cfg) {
  if (cfg.m < 0) throw InvalidParam("m must be >= 0");
  Xoshiro256 rng(cfg.seed);
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(static_cast<std::size_t>(cfg.m));
  for (long i = 0; i < cfg.m; ++i) rows.push_back(sample_row(cfg, rng));
  return rows;
}

GF2Matrix sample_matrix(const SampleConfig& cfg) {
  GF2Matrix out(static_cast<std::size_t>(cfg.n));
  for (const auto& r : sample_rows(cfg)) out.add_row_indices(r);
  return out;
}

long run_Tn(const SampleConfig& cfg, std::optional<long> cap) {
  if (cfg.n < 1) throw InvalidParam("n must be >= 1");
  Xoshiro256 rng(cfg.seed);
  RankState state(static_cast<std::size_t>(cfg.n));
  const long limit = cap ? std::min<long>(*cap, cfg.n + 1) : cfg.n + 1;
  for (long m = 1; m <= limit; ++m)
    if (state.absorb_indices(sample_row(cfg, rng))) return m;
  return limit + 1;
}

}  // namespace sparsegf2
