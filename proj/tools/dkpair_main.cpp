#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pairings of van Daele K-classes with cyclic cocycles"};
  app.require_subcommand(1);
  dkpair::cli::CommandOptions opt;
  std::string report;

  auto common = [&](CLI::App* c) {
    c->add_option("--config", opt.config, "Model configuration (JSON)");
    c->add_option("--grid", opt.grid, "Points per momentum axis");
    c->add_option("--tgrid", opt.tgrid, "Time samples");
    c->add_option("--tol", opt.tol, "Integer and refinement tolerance");
    c->add_option("--report", report, "Write the JSON report to this file");
  };
  auto* pair = app.add_subcommand("pair", "Pair a class with ch0, ch1 or ch2");
  auto* z2 = app.add_subcommand("z2", "Kane-Mele torsion pairing and Z2 class");
  auto* floquet = app.add_subcommand("floquet", "Floquet invariant K(P) of a periodic drive");
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  for (auto* c : {pair, z2, floquet, verify}) common(c);
  floquet->add_option("--z0", opt.z0, "Start phase of the spectral arc");
  floquet->add_option("--z1", opt.z1, "End phase of the spectral arc");
  floquet->add_option("--strategy", opt.strategy, "decoupled or user_supplied");
  floquet->add_option("--emit-contractions", opt.emit_contractions,
                      "Write the involution contractions to PREFIX0.dkgrid and PREFIX1.dkgrid");
  floquet->add_flag("--binary", opt.binary, "Emit contraction grids in binary form");
  verify->add_option("suite", opt.suite,
                     "clifford, selection-rules, pimsner, torsion, ko-examples or all")
      ->check(CLI::IsMember({"all", "clifford", "selection-rules", "pimsner", "torsion", "ko-examples"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const auto res = dkpair::cli::run_command(command, opt);
  const std::string text = res.report.dump(2);
  std::cout << text << "\n";
  if (!report.empty()) {
    std::ofstream out(report);
    out << text << "\n";
    if (!out) {
      std::cerr << "cannot write report " << report << "\n";
      return res.exit_code ? res.exit_code : 1;
    }
  }
  if (res.exit_code) std::cerr << "dkpair " << command << ": " << res.report.value("error", "") << "\n";
  return res.exit_code;
}
