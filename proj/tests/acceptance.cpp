// Runs acceptance criteria 1-11 and prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion...]

#include <cstdio>
#include <cstdlib>
#include <exception>

#include "rbq/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<rbq::CriterionResult> results;
  try {
    if (argc > 1) {
      for (int i = 1; i < argc; ++i) results.push_back(rbq::run_criterion(std::atoi(argv[i])));
    } else {
      results = rbq::run_acceptance();
    }
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance harness: %s\n", e.what());
    return 1;
  }
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s %2d %s: %s (%.2f s)\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str(),
                r.seconds);
    if (!r.passed) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(results.size()) - failed, results.size());
  return failed == 0 ? 0 : 1;
}
