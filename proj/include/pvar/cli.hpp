#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pvar::cli {

/// Exit codes: 0 success, 1 selftest failure, 2 invalid arguments or input,
/// 3 budget exceeded.
int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int execute(int argc, char** argv);

}  // namespace pvar::cli
