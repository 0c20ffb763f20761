#pragma once

#include <string>
#include <vector>

namespace dkpair::cli {

struct Check {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};

std::vector<std::string> verify_suites();
// Throws ValidationError for unknown suite names.
std::vector<Check> run_suite(const std::string& suite, int grid, int tgrid);

}  // namespace dkpair::cli
