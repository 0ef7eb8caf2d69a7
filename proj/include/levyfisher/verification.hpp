#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyfisher/asymptotics.hpp"

namespace levyfisher {

// One named acceptance check with the tolerances it applies.
struct CriterionInfo {
  int id = 0;
  std::string name;
  std::string tolerance;
  double time_budget_seconds = 0.0;  // 0 means no budget
};

const std::vector<CriterionInfo>& criteria_manifest();
nlohmann::json manifest_json();

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::vector<std::string> details;  // one line per sub-check
};

// Runs one criterion; numerical exceptions are caught and reported as failures.
CheckResult run_criterion(int id, const QuadratureConfig& cfg = {});

// Assertion rows for one theorem at the given parameters.
struct AssertionRow {
  TheoremId theorem = TheoremId::T2a;
  Entry entry = Entry::SS;
  std::string kind;
  double observed = 0.0;
  double predicted = 0.0;
  double lower = 0.0;  // for intervals
  double tolerance = 0.0;
  double delta = 0.0;  // smallest delta of the sweep
  bool passed = false;
  std::string note;
};

// Spec the theorem is about when the caller gives none.
PerturbationSpec default_spec_for(TheoremId id, double beta);

// Sweeps each display of the theorem over the deltas and compares the
// normalized value at the smallest delta with the prediction.
std::vector<AssertionRow> verify_theorem(TheoremId id, const ModelParams& params, const PerturbationSpec& spec,
                                         const std::vector<double>& deltas = default_deltas(),
                                         const QuadratureConfig& cfg = {});

}  // namespace levyfisher
