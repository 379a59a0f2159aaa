#pragma once

#include <string>
#include <vector>

#include "diophnet/encoding.hpp"

namespace diophnet {

struct GoldenCheck {
  std::string name;
  double expected = 0.0;
  double got = 0.0;
  double tolerance = 0.0;  // absolute; 0 means exact equality
  bool passed = false;
};

struct ReproductionReport {
  std::vector<GoldenCheck> checks;
  std::vector<std::string> notes;

  bool passed() const;
  // One "PASS"/"FAIL" line per check followed by the notes.
  std::string to_text() const;
};

/// Re-runs the three worked regression/MLP examples (single linear fit,
/// quadratic fit, two-layer perceptron) and compares every golden quantity.
/// `rule` drives the integer projections checked against the golden values;
/// passing Rounding::half_up is the negative control.
ReproductionReport reproduce_examples(Rounding rule = Rounding::half_toward_zero);

}  // namespace diophnet
