#pragma once

#include <iosfwd>

namespace ptsmc::cli {

enum ExitCode : int {
    kOk = 0,
    kChecksFailed = 1,
    kBadInput = 2,
    kRunFailed = 3,
    kWriteFailed = 4,
};

/// Entry point of the `ptsmc` command line tool.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptsmc::cli
