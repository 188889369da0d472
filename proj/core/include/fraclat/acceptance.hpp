// The verification battery: eleven numbered criteria, each a self-contained
// pass/fail check with printed evidence.  The suite is used both by the
// acceptance test binary (one criterion per ctest entry) and by the CLI
// `suite` subcommand.
#pragma once

#include <string>
#include <vector>

namespace fraclat {

struct CriterionResult {
  int id;
  std::string name;
  bool pass;
  double seconds;
  std::vector<std::string> detail;  // printed evidence lines
};

// ids 1..11; out_dir: where criteria that produce files write them (empty =
// a temp directory).  Criterion 11 (determinism) reruns the file-producing
// criteria twice and byte-compares.
CriterionResult run_criterion(int id, const std::string& out_dir = "");

std::vector<CriterionResult> run_all(const std::string& out_dir = "");

int criterion_count();
const char* criterion_name(int id);

}  // namespace fraclat
