#pragma once

#include <ostream>

namespace sal {

// exit codes: 0 ok, 2 argument error, 3 non-converged computation
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sal
