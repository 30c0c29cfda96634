#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace expmatch {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Criteria to run (1..11); empty runs all.
  std::vector<int> only;
  /// Progress lines; may be null.
  std::ostream* progress = nullptr;
};

inline constexpr int kNumCriteria = 11;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

/// Single criterion; throws std::out_of_range for an unknown id.
CriterionResult run_criterion(int id, std::ostream* progress = nullptr);

}  // namespace expmatch
