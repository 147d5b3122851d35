#pragma once

namespace mixspec::cli {

/// Command-line front door. Returns the process exit status:
/// 0 success, 1 parameter/domain/config errors, 2 solver non-convergence.
int run(int argc, const char* const* argv);

}  // namespace mixspec::cli
