#pragma once

// JSON form of fuzzy numbers:
//   {"kind":"triangular","a":0,"b":0.5,"c":1}
//   {"kind":"singleton","value":1}
//   {"kind":"general","levels":[[0.01,[lo,hi]], ..., [1.0,[lo,hi]]]}

#include <string>

#include <nlohmann/json.hpp>

#include "fuzzylimit/fuzzy_number.hpp"

namespace fuzzylimit {

/// Throws InvalidShape / InvalidValue / InconsistentCuts on bad input and
/// InvalidValue on malformed JSON text.
FuzzyNumber fuzzy_from_json(const nlohmann::ordered_json& j, const AlphaGrid& grid = {});
FuzzyNumber fuzzy_from_json_text(const std::string& text, const AlphaGrid& grid = {});

nlohmann::ordered_json fuzzy_to_json(const FuzzyNumber& f);

}  // namespace fuzzylimit
