#include "holocert/report.hpp"

#include <cmath>

namespace holocert {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::HypothesisNotMet: return "hypothesis_not_met";
    case Outcome::Vacuous: return "vacuous";
    case Outcome::Diagnostic: return "diagnostic";
  }
  return "unknown";
}

CertReport CertReport::compare(std::string name, std::string paper_tag,
                               double lhs_log, double rhs_log, double tol) {
  CertReport r;
  r.name = std::move(name);
  r.paper_tag = std::move(paper_tag);
  r.lhs_log = lhs_log;
  r.rhs_log = rhs_log;
  if (std::isinf(lhs_log) && lhs_log < 0) {
    // identically vanishing left side: the inequality holds with infinite
    // margin unless the right side is -inf too, in which case both sides
    // vanish and we call it an exact tie.
    r.margin_log = (std::isinf(rhs_log) && rhs_log < 0)
                       ? 0.0
                       : std::numeric_limits<double>::infinity();
  } else {
    r.margin_log = rhs_log - lhs_log;
  }
  r.pass = r.margin_log >= -tol;
  r.outcome = r.pass ? Outcome::Pass : Outcome::Fail;
  return r;
}

CertReport CertReport::hypothesis_not_met(std::string name,
                                          std::string paper_tag,
                                          std::string note) {
  CertReport r;
  r.name = std::move(name);
  r.paper_tag = std::move(paper_tag);
  r.pass = false;
  r.outcome = Outcome::HypothesisNotMet;
  r.note = std::move(note);
  return r;
}

CertReport CertReport::diagnostic(std::string name, std::string paper_tag) {
  CertReport r;
  r.name = std::move(name);
  r.paper_tag = std::move(paper_tag);
  r.pass = true;
  r.outcome = Outcome::Diagnostic;
  return r;
}

nlohmann::json point_to_json(const Point& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Complex& c : p) arr.push_back({c.real(), c.imag()});
  return arr;
}

namespace {
nlohmann::json json_number(double v) {
  // nlohmann prints non-finite numbers as null; keep them legible instead.
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}
}  // namespace

nlohmann::json report_to_json(const CertReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["paper_tag"] = r.paper_tag;
  j["lhs_log"] = json_number(r.lhs_log);
  j["rhs_log"] = json_number(r.rhs_log);
  j["margin_log"] = json_number(r.margin_log);
  j["pass"] = r.pass;
  j["outcome"] = outcome_name(r.outcome);
  j["constants"] = constants_to_json(r.constants);
  j["params"] = r.params;
  nlohmann::json w = nlohmann::json::array();
  for (const Point& p : r.witnesses) w.push_back(point_to_json(p));
  j["witnesses"] = w;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace holocert
