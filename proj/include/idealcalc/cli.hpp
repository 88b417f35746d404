#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "idealcalc/error.hpp"

namespace idealcalc {

/// 0 holds/pass, 1 fails, 2 undecided or missing evidence, 3 usage/input error.
int exit_code(ErrorKind kind);

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace idealcalc
