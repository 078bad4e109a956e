#pragma once

#include "dlfr/error.hpp"

#include <iosfwd>

namespace dlfr::cli {

/// 2 for parameter/config/dimension errors, 3 for I/O, 4 for malformed files.
int exit_code(ErrorKind kind) noexcept;

/// Runs the `dlfr` command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dlfr::cli
