#pragma once

// JSON serialization of limit results, certificates and theorem reports.
// Non-finite numbers are written as null.

#include <vector>

#include <nlohmann/json.hpp>

#include "fuzzylimit/theorems.hpp"

namespace fuzzylimit {

using ojson = nlohmann::ordered_json;

ojson number_json(double v);
ojson interval_json(const Interval& iv);
ojson outcome_json(const Outcome& o);
/// Outcome plus per-side outcomes when present.
ojson limit_result_json(const LimitResult& r);
ojson certificate_json(const Certificate& c);
ojson theorem_report_json(const TheoremReport& r);
ojson sequential_json(const SequentialReport& r);

/// Rows {alpha, lo, hi} sorted by alpha.
ojson alpha_table_json(const FuzzyNumber& f);

}  // namespace fuzzylimit
