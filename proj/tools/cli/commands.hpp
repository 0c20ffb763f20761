#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace dkpair::cli {

inline constexpr const char* kReportSchema = "dkpair-report/1";

struct CommandOptions {
  std::optional<std::string> config;
  std::optional<int> grid;
  std::optional<int> tgrid;
  std::optional<double> tol;
  std::string suite = "all";
  std::optional<double> z0;
  std::optional<double> z1;
  std::optional<std::string> strategy;
  std::optional<std::string> emit_contractions;
  bool binary = false;
};

struct CommandResult {
  int exit_code = 0;
  nlohmann::ordered_json report;
};

// Exit codes: 0 success, 2 validation or shape error, 3 convergence or
// integerness failure, 4 gap closed, 1 anything else. The report is filled in
// as far as the command got, with status naming the failure.
CommandResult run_command(const std::string& command, const CommandOptions& opt);

}  // namespace dkpair::cli
