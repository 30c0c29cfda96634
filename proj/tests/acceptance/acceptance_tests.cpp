#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

#include "expmatch/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> ids;
  app.add_option("--criterion", ids, "Criterion ids to run (default: all)")->check(CLI::Range(1, expmatch::kNumCriteria));
  CLI11_PARSE(app, argc, argv);

  expmatch::AcceptanceOptions options;
  options.only = ids;
  options.progress = &std::cerr;
  bool all = true;
  for (const auto& r : expmatch::run_acceptance(options)) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << r.id << "  " << r.name << "  ("
              << std::fixed << std::setprecision(2) << r.seconds << " s)  " << r.detail << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
