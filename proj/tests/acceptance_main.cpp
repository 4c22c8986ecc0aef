#include <cstring>
#include <iostream>

#include "factoria/acceptance.hpp"

int main(int argc, char** argv) {
  auto suite = factoria::Suite::Full;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "quick") == 0 || std::strcmp(argv[i], "--quick") == 0) {
      suite = factoria::Suite::Quick;
    }
  }
  int failed = 0;
  factoria::run_acceptance(suite, [&](const factoria::CriterionResult& r) {
    std::cout << factoria::format_result(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
