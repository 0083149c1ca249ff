#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace satsim::cli {

// Full command-line front end; the binary in tools/ is a thin wrapper so the
// same entry point is exercised in-process by the tests.
// Subcommands: simulate, optimize, sweep, threshold, rate.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace satsim::cli
