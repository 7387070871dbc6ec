#pragma once

#include <iosfwd>

namespace descente {

// Exit codes: 0 pass/valid, 1 negative verdict, 2 invalid input or usage,
// 3 internal guard.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace descente
