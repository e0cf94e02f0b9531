#pragma once

#include <string>

#include "json.hpp"
#include "sparsegf2/bigreal.hpp"
#include "sparsegf2/core.hpp"
#include "sparsegf2/exact.hpp"
#include "sparsegf2/thresholds.hpp"
#include "sparsegf2/verify.hpp"

namespace sparsegf2 {

const char* version();

// Numbers that matter to many digits go out as {"value": double, "decimal": text}.
nlohmann::json num(double v);
nlohmann::json num(const BigReal& v);
nlohmann::json num(const Rational& q);  // adds "exact": "p/q"

// {"tool", "version", "command", "config"}; config should hold every resolved flag.
nlohmann::json output_header(const std::string& command, const nlohmann::json& config);

nlohmann::json to_json(const ThresholdReport& r);
nlohmann::json to_json(const CoreStats& s, bool with_edges = false);
nlohmann::json to_json(const CoreTheory& t);
nlohmann::json to_json(const BigResult& r);
nlohmann::json to_json(const VerifyReport& r);

// Fixed-weight thresholds for r = 1..8 with alpha_bar null where undefined.
nlohmann::json table1_json(unsigned bits = kDefaultPrecisionBits);

}  // namespace sparsegf2
