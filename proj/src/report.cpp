#include "besov/report.hpp"

#include <cmath>
#include <limits>

namespace besov {

VerificationReport VerificationReport::make(std::string check, double measured, double bound, double tolerance,
                                            nlohmann::json metadata) {
  VerificationReport r;
  r.check = std::move(check);
  r.measured = measured;
  r.bound = bound;
  if (bound > 0.0)
    r.ratio = measured / bound;
  else
    r.ratio = measured == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  r.tolerance = tolerance;
  r.verdict = std::isfinite(r.ratio) && r.ratio <= 1.0 + tolerance;
  r.metadata = std::move(metadata);
  return r;
}

nlohmann::json VerificationReport::to_json() const {
  auto finite = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  return {{"check", check},         {"measured", finite(measured)},   {"bound", finite(bound)},
          {"ratio", finite(ratio)}, {"tolerance", finite(tolerance)}, {"verdict", verdict ? "pass" : "fail"},
          {"metadata", metadata}};
}

}  // namespace besov
