#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace recur::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kCapExceeded = 3,
  kInvariant = 4,
};

/// Runs one command line (without the program name). Results go to `out`,
/// a single "error <kind>: <message>" line to `err` on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace recur::cli
