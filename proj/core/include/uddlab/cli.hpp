#pragma once

namespace uddlab::cli {

/// Parses and executes one command-line invocation. Subcommands: timings,
/// bound, simulate, scaling, dyson-check. Returns 0 on success, 1 when a
/// verified property fails (bound violation, off-order scaling slope,
/// non-vanishing word), 2 on usage errors. Outputs go to stdout unless an
/// --out path is given; relative paths are resolved against the
/// UDDLAB_OUT_DIR environment variable when it is set.
int run(int argc, const char* const* argv);

}  // namespace uddlab::cli
