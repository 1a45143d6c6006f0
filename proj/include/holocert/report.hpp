#pragma once

// One certified inequality: log-domain sides, margin, outcome, and the exact
// constants/parameters that produced it. Hypothesis failures are first-class
// outcomes, not errors: the theorems are conditional and the reports document
// which premise failed.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "holocert/constants.hpp"
#include "holocert/function.hpp"

namespace holocert {

enum class Outcome { Pass, Fail, HypothesisNotMet, Vacuous, Diagnostic };

std::string outcome_name(Outcome o);

struct CertReport {
  std::string name;
  std::string paper_tag;
  double lhs_log = 0.0;
  double rhs_log = 0.0;
  double margin_log = 0.0;  // rhs - lhs
  bool pass = false;        // margin_log >= -tol
  Outcome outcome = Outcome::Fail;
  ConstantsBundle constants;
  nlohmann::json params;  // echo of all inputs
  std::vector<Point> witnesses;
  std::string note;

  static CertReport compare(std::string name, std::string paper_tag,
                            double lhs_log, double rhs_log, double tol);
  static CertReport hypothesis_not_met(std::string name, std::string paper_tag,
                                       std::string note);
  static CertReport diagnostic(std::string name, std::string paper_tag);
};

nlohmann::json report_to_json(const CertReport& r);
nlohmann::json point_to_json(const Point& p);

// true when the report should count against the exit status
inline bool report_is_red(const CertReport& r) {
  return r.outcome == Outcome::Fail;
}

}  // namespace holocert
