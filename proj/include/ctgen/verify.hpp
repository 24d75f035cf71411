#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ctgen {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool supplementary = false;
  bool pass = false;
  std::string detail;
  /// Measured quantities as (name, printed value).
  std::vector<std::pair<std::string, std::string>> metrics;
  double seconds = 0;
};

struct VerifyOptions {
  /// Path of the command-line tool; when set, the determinism check also
  /// compares two complete CLI runs byte for byte.
  std::string cli_path;
  /// Skip the supplementary runs attached to failing criteria.
  bool skip_supplementary = false;
};

constexpr int kCriterionCount = 10;

/// Runs one acceptance criterion (1..10). The first result is the
/// criterion itself; any further ones are supplementary measurements.
std::vector<CriterionResult> run_criterion(int id, const VerifyOptions& options = {});

/// One line per result: "[PASS] 3 name: detail".
std::string result_line(const CriterionResult& r);

/// {"format":1,"results":[...]}
std::string results_json(const std::vector<CriterionResult>& results);

}  // namespace ctgen
