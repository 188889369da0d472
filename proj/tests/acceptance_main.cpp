// Acceptance battery driver.  Runs one numbered criterion (argv[1] = 1..11)
// or the whole battery (argv[1] = "all" or no argument), prints one
// [PASS]/[FAIL] line per criterion with its evidence underneath, and exits
// nonzero if anything failed.
#include "fraclat/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

namespace {

void print_result(const fraclat::CriterionResult& res) {
  std::printf("[%s] criterion %d: %s (%.2fs)\n", res.pass ? "PASS" : "FAIL",
              res.id, res.name.c_str(), res.seconds);
  for (const std::string& line : res.detail)
    std::printf("    %s\n", line.c_str());
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  std::string which = "all";
  std::string out_dir;
  if (argc >= 2) which = argv[1];
  if (argc >= 3) out_dir = argv[2];

  std::vector<fraclat::CriterionResult> results;
  try {
    if (which == "all") {
      for (int id = 1; id <= fraclat::criterion_count(); ++id) {
        results.push_back(fraclat::run_criterion(id, out_dir));
        print_result(results.back());
      }
    } else {
      const int id = std::atoi(which.c_str());
      if (id < 1 || id > fraclat::criterion_count()) {
        std::fprintf(stderr, "usage: %s [1..%d|all] [out_dir]\n", argv[0],
                     fraclat::criterion_count());
        return 2;
      }
      results.push_back(fraclat::run_criterion(id, out_dir));
      print_result(results.back());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const fraclat::CriterionResult& res : results)
    if (!res.pass) ++failed;
  if (failed > 0) {
    std::printf("%d of %zu criteria FAILED\n", failed, results.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", results.size());
  return 0;
}
