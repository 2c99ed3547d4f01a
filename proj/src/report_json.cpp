#include "fuzzylimit/report_json.hpp"

#include <cmath>

namespace fuzzylimit {

ojson number_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson interval_json(const Interval& iv) { return ojson::array({number_json(iv.lo()), number_json(iv.hi())}); }

ojson outcome_json(const Outcome& o) {
  ojson j;
  j["outcome"] = outcome_name(o);
  if (const auto* c = std::get_if<Converged>(&o)) {
    j["core"] = interval_json(c->value.core());
    j["base"] = interval_json(c->value.base());
  } else if (const auto* n = std::get_if<NoLimit>(&o)) {
    j["reason"] = reason_name(n->reason);
    j["detail"] = n->detail;
  } else if (const auto* u = std::get_if<Undetermined>(&o)) {
    j["detail"] = u->detail;
  }
  return j;
}

ojson limit_result_json(const LimitResult& r) {
  ojson j = outcome_json(r.outcome);
  if (r.left || r.right) {
    ojson sides;
    if (r.left) sides["left"] = outcome_json(*r.left);
    if (r.right) sides["right"] = outcome_json(*r.right);
    j["sides"] = std::move(sides);
  }
  return j;
}

ojson certificate_json(const Certificate& c) {
  ojson j;
  j["kind"] = c.kind == Certificate::Kind::Delta ? "delta" : c.kind == Certificate::Kind::K ? "K" : "none";
  j["eps"] = c.eps_grid;
  j["certified"] = c.certified();
  ojson failures = ojson::array();
  for (const auto& f : c.failures) failures.push_back({{"alpha", f.alpha}, {"eps", f.eps}});
  j["failures"] = std::move(failures);
  ojson levels = ojson::array();
  for (const auto& l : c.levels) {
    ojson lj;
    lj["alpha"] = l.alpha;
    ojson ws = ojson::array();
    for (const auto& w : l.witnesses)
      ws.push_back({{"eps", w.eps}, {"witness", w.witness ? number_json(*w.witness) : ojson(nullptr)},
                    {"certified", w.certified}});
    lj["witnesses"] = std::move(ws);
    ojson res;
    auto arr = [](const std::vector<double>& v) {
      ojson a = ojson::array();
      for (double x : v) a.push_back(number_json(x));
      return a;
    };
    res["left"] = arr(l.residuals_left);
    res["right"] = arr(l.residuals_right);
    lj["residuals"] = std::move(res);
    levels.push_back(std::move(lj));
  }
  j["levels"] = std::move(levels);
  return j;
}

ojson theorem_report_json(const TheoremReport& r) {
  ojson j;
  j["theorem"] = theorem_name(r.theorem);
  j["status"] = status_name(r.status);
  j["max_alpha_gap"] = number_json(r.max_alpha_gap);
  j["notes"] = r.notes;
  if (r.witness_alpha) j["witness_alpha"] = *r.witness_alpha;
  if (r.known_dependency) j["known_dependency"] = true;
  return j;
}

ojson sequential_json(const SequentialReport& r) {
  ojson j;
  j["sequences"] = r.n_seqs;
  j["n_final"] = r.n_final;
  j["passed"] = r.passed();
  ojson v = ojson::array();
  for (const auto& x : r.violations)
    v.push_back({{"index", x.index}, {"direction", x.direction}, {"alpha", x.alpha}, {"gap", number_json(x.gap)},
                 {"detail", x.detail}});
  j["violations"] = std::move(v);
  return j;
}

ojson alpha_table_json(const FuzzyNumber& f) {
  ojson rows = ojson::array();
  for (const auto& l : f.levels())
    rows.push_back({{"alpha", l.alpha}, {"lo", number_json(l.cut.lo())}, {"hi", number_json(l.cut.hi())}});
  return rows;
}

}  // namespace fuzzylimit
