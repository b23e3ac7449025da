#pragma once

namespace mee {

// Subcommands: simulate, estimate, experiment, oracle, rates.
// Exit codes: 0 success, 1 usage, 2 runtime failure.
int cli_main(int argc, const char* const* argv);

}  // namespace mee
