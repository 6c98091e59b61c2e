#pragma once

namespace hind {

// Entry point behind the hind binary; returns the process exit code.
// 0 = success, 1 = partial failures recorded in the ledger,
// 2 = configuration / IO error.
int run_cli(int argc, char** argv);

}  // namespace hind
