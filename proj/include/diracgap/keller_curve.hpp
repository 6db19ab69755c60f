#pragma once

#include <string>
#include <vector>

namespace diracgap {

struct KellerPoint {
  double alpha = 0.0;
  double lambda = 0.0;
  std::string provenance;  // "closed-form", "grid" or "ode"
};

struct KellerCurve {
  std::vector<KellerPoint> points;
  // Human-readable notes about skipped samples or monotonicity violations.
  std::vector<std::string> notes;

  // True when alpha decreases strictly as lambda increases along the stored order.
  bool strictly_decreasing() const;
};

}  // namespace diracgap
