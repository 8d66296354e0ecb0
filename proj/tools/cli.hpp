#pragma once

#include <iosfwd>

namespace fracbd::cli {

/// Exit codes: 0 success, 1 numerical failure, 2 usage error.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Embedded invariant suite behind `fracbd selfcheck`; returns the number of
/// failed checks.
int selfcheck(std::ostream& out);

}  // namespace fracbd::cli
