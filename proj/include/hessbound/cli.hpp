#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hessbound {

/// Runs the command line tool; args excludes the program name.
/// Returns the process exit code.
int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err);

} // namespace hessbound
