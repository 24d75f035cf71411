// Acceptance runner: one pass/fail line per criterion, followed by any
// supplementary measurements. Usage: ctgen_acceptance [--cli PATH]
// [--no-supplementary] [id ...]. Exit status is nonzero if a requested
// criterion fails.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "ctgen/verify.hpp"

int main(int argc, char** argv) {
  ctgen::VerifyOptions options;
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      options.cli_path = argv[++i];
    } else if (arg == "--no-supplementary") {
      options.skip_supplementary = true;
    } else {
      ids.push_back(std::atoi(arg.c_str()));
    }
  }
  if (ids.empty())
    for (int id = 1; id <= ctgen::kCriterionCount; ++id) ids.push_back(id);
  int failed = 0;
  for (int id : ids) {
    for (const auto& r : ctgen::run_criterion(id, options)) {
      std::cout << ctgen::result_line(r) << std::endl;
      if (!r.supplementary && !r.pass) ++failed;
    }
  }
  return failed == 0 ? 0 : 1;
}
