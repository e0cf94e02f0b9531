#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsegf2/gf2.hpp"
#include "sparsegf2/rng.hpp"
#include "sparsegf2/weight_model.hpp"

namespace sparsegf2 {

enum class WeightModel { exact, binomial };

WeightModel parse_model(const std::string& name);
std::string model_name(WeightModel model);

struct SampleConfig {
  int n = 1;
  long m = 0;
  WeightDist dist = WeightDist::point_mass(3);
  WeightModel model = WeightModel::exact;
  std::uint64_t seed = 0;
};

// Uniform k-subset of {0..n-1}, sorted (Floyd's algorithm).
std::vector<std::uint32_t> sample_subset(int k, int n, Xoshiro256& rng);

// Column indices (sorted, non-empty) of one row of M(n, .).
std::vector<std::uint32_t> sample_row(const SampleConfig& cfg, Xoshiro256& rng);

// Rows as sorted column-index lists; row i is identical to row i of sample_matrix.
std::vector<std::vector<std::uint32_t>> sample_rows(const SampleConfig& cfg);
GF2Matrix sample_matrix(const SampleConfig& cfg);

// First m at which the rows become dependent (always <= n + 1). When `cap` is
// given, stops after cap rows and returns cap + 1 if none was dependent.
long run_Tn(const SampleConfig& cfg, std::optional<long> cap = std::nullopt);

}  // namespace sparsegf2
