#pragma once

#include <iosfwd>

namespace pgroup {

/// The pgroup command line.  Reports go to `out`, diagnostics to `err`.
/// Returns 0, 1 (unexpected invariant failure), 2 (usage or input error) or
/// 3 (a backward witness for the d(G) = log_p |Omega_1(G)| question).
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace pgroup
