#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace suctiongrip {

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitNoConstellation = 2,
  kExitNoCommonConstellation = 3,
};

/// Runs the command line (without the program name). Reports go to `--out`
/// or `out`; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace suctiongrip
