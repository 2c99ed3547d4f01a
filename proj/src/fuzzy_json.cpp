#include "fuzzylimit/fuzzy_json.hpp"

namespace fuzzylimit {

namespace {

double number_field(const nlohmann::ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number())
    throw InvalidValue(std::string("fuzzy number JSON needs numeric field \"") + key + "\"");
  return it->get<double>();
}

}  // namespace

FuzzyNumber fuzzy_from_json(const nlohmann::ordered_json& j, const AlphaGrid& grid) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw InvalidValue("fuzzy number JSON must be an object with a \"kind\" string");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "singleton") return from_singleton(number_field(j, "value"), grid);
  if (kind == "triangular")
    return from_triangular(number_field(j, "a"), number_field(j, "b"), number_field(j, "c"), grid);
  if (kind == "general") {
    auto it = j.find("levels");
    if (it == j.end() || !it->is_array()) throw InvalidValue("general fuzzy number needs \"levels\" array");
    std::vector<AlphaCut> cuts;
    for (const auto& row : *it) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_array() ||
          row[1].size() != 2 || !row[1][0].is_number() || !row[1][1].is_number())
        throw InvalidValue("general level rows look like [alpha, [lo, hi]]");
      cuts.push_back({row[0].get<double>(), Interval(row[1][0].get<double>(), row[1][1].get<double>())});
    }
    return reconstruct(std::move(cuts));
  }
  throw InvalidValue("unknown fuzzy number kind \"" + kind + "\"");
}

FuzzyNumber fuzzy_from_json_text(const std::string& text, const AlphaGrid& grid) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidValue(std::string("malformed JSON: ") + e.what());
  }
  return fuzzy_from_json(j, grid);
}

nlohmann::ordered_json fuzzy_to_json(const FuzzyNumber& f) {
  nlohmann::ordered_json j;
  if (const auto* s = std::get_if<Singleton>(&f.shape())) {
    j["kind"] = "singleton";
    j["value"] = s->value;
  } else if (const auto* t = std::get_if<Triangular>(&f.shape())) {
    j["kind"] = "triangular";
    j["a"] = t->a;
    j["b"] = t->b;
    j["c"] = t->c;
  } else {
    j["kind"] = "general";
    auto levels = nlohmann::ordered_json::array();
    for (const auto& l : f.levels()) levels.push_back({l.alpha, {l.cut.lo(), l.cut.hi()}});
    j["levels"] = std::move(levels);
  }
  return j;
}

}  // namespace fuzzylimit
