#pragma once

namespace unif {

// Entry point for the `uniformity` tool. Exit codes: 0 success, 2 usage or
// spec error, 3 validity violation, 4 resource guard.
int run_cli(int argc, const char* const* argv);

} // namespace unif
