#pragma once

#include <ostream>

#include "config.hpp"

namespace vestokes::cli {

/// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kCheckFailed = 1,
    kConfig = 2,  // also parameters violating mu1 + mu2 + mu3 > 0
    kNotSPD = 3,
    kNotElliptic = 4,
    kSolverFailure = 5,
    kRateFailure = 6,
};

int cmd_ellipticity(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_mms(const RunConfig& c, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err);

/// Dispatch on c.command; library errors escaping a command map to exit codes.
int run_command(const RunConfig& c, std::ostream& out, std::ostream& err);

}  // namespace vestokes::cli
