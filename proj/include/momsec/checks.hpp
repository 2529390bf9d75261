#ifndef MOMSEC_CHECKS_HPP
#define MOMSEC_CHECKS_HPP

#include "momsec/model_io.hpp"

namespace momsec {

struct CheckResult {
  std::string name;
  bool pass = false;
  double max_residual = 0.0;
  double rel_residual = 0.0;
  std::vector<double> argmax;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> info;
};

struct Report {
  std::vector<CheckResult> results;
  RunConfig config;
  bool all_pass = true;
};

/// Names understood by run_checks, in registry order.
std::vector<std::string> known_checks();

/// Executes the document's requested checks in declared order.
/// Deterministic given (document, seed). Throws ModelError on an unknown
/// check name or a check whose required sections are missing.
Report run_checks(const ModelDocument& doc);

std::string report_json(const Report& rep);
std::string report_text(const Report& rep);

}  // namespace momsec

#endif
