#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "phonon/config.hpp"

namespace phonon {

/// Process exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2, kExitValidation = 3 };

/// Entry point of the `phonon` tool; argv[0] is the program name.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_figure(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_analytic(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace phonon
