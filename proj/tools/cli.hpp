#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace discform {

/// Runs the command line; the JSON document goes to `out` (or --out), usage
/// and error text to `err`. Exit codes: 0 success, 1 usage or internal
/// error, 2 verification FAIL or local obstruction.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace discform
