#pragma once

namespace adha::cli {

/// Entry point of the `adha-synth` command line. Returns the process exit
/// code: 64 for usage errors, 65 for bad data, 70 for internal failures.
/// `member` returns 0, 1 or 2 for captured, not captured and unknown.
int run(int argc, char** argv);

}  // namespace adha::cli
