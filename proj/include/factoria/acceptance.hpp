#pragma once

#include <functional>
#include <string>
#include <vector>

namespace factoria {

enum class Suite { Quick, Full };

struct CriterionResult {
  int id = 0;
  std::string title;
  bool quick = false;
  bool passed = false;
  std::string detail;  // measured values behind the verdict
  double seconds = 0;
};

// One line per criterion: "PASS  3  title  detail  (t s)".
std::string format_result(const CriterionResult& r);

// Runs the acceptance criteria in order. Quick runs only those marked quick.
// Exceptions inside a criterion count as a failure with the message as detail.
std::vector<CriterionResult> run_acceptance(
    Suite suite, const std::function<void(const CriterionResult&)>& on_result = {});

}  // namespace factoria
