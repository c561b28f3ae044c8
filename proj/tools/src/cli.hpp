#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace regseq::cli {

/// Runs one command line (without the program name) and returns the exit
/// code: 0 success, 2 validation, 3 resource limit, 4 oracle mismatch,
/// 1 anything else. Errors are one line on `err`:
///   error: kind=<kind> exit=<code> message="<text>"
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regseq::cli
