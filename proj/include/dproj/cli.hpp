#pragma once

#include <iosfwd>

namespace dproj {

/// Entry point of the command-line tool. Exit status: 0 success, 1 rejected
/// input or usage error, 2 internal invariant failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dproj
