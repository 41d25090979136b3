// Runs every acceptance criterion and prints one PASS/FAIL line each.
// Exit status is nonzero when any criterion fails.
#include <cstdlib>
#include <iostream>

#include "d2dee/acceptance.hpp"

int main() {
  d2dee::acceptance::Options opt;
  if (const char* seed = std::getenv("D2DEE_ACCEPTANCE_SEED")) opt.seed = std::strtoull(seed, nullptr, 10);
  int failed = 0;
  d2dee::acceptance::run(opt, [&](const d2dee::acceptance::CriterionResult& r) {
    std::cout << d2dee::acceptance::format_result(r) << std::endl;
    failed += !r.pass;
  });
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << failed << " criteria failing" << std::endl;
  return failed ? 1 : 0;
}
