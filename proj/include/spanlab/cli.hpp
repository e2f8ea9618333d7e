#pragma once

#include <ostream>

namespace spanlab {

/// Runs one spanlab invocation (argv[0] is the program name). Exit codes:
/// 0 complete, 2 partial (budget ran out), 1 failed or a violation found;
/// argument errors return the parser's nonzero code.
int run_command(int argc, const char* const argv[], std::ostream& out, std::ostream& err);

}  // namespace spanlab
