#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "pmelt/audit.hpp"

namespace pmelt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Entry point behind the `pmelt` binary. `args` excludes the program name.
/// Data goes to `out` or to files; diagnostics go to `err`.
///
/// Exit codes: 0 success, 1 domain error (bad input data, failed audit),
/// 2 usage error.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err,
        const MeltOperator& melt_op = melt);

}  // namespace pmelt::cli
