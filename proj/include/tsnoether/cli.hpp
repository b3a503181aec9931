#pragma once

namespace tsn {

/// Full command-line entry point (argument parsing, dispatch, exit code).
/// Kept in the library so tests can drive it in-process.
int run_cli(int argc, const char* const* argv);

} // namespace tsn
