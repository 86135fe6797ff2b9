#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace besov {

// Outcome of a measured-versus-bound check. Passes iff ratio <= 1 + tolerance.
struct VerificationReport {
  std::string check;
  double measured = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  double tolerance = 0.0;
  bool verdict = false;
  nlohmann::json metadata = nlohmann::json::object();

  static VerificationReport make(std::string check, double measured, double bound, double tolerance,
                                 nlohmann::json metadata = nlohmann::json::object());

  nlohmann::json to_json() const;
};

}  // namespace besov
