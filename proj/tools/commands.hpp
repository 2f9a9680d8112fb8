#pragma once

#include <ostream>

namespace lqg::cli {

/// Entry point of the lqgraph command line. Artifacts go to --out (or
/// `out`); diagnostics go to `err`. Exit codes: 0 success, 1 malformed
/// configuration, 2 domain error, 3 numeric or generation failure.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace lqg::cli
