#pragma once

namespace cqed::cli {

// Full command-line front end. Returns the process exit code:
// 0 success, 2 config error, 3 numerical failure, 4 consistency failure.
int run_cli(int argc, const char* const* argv);

}  // namespace cqed::cli
