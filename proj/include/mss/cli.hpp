#pragma once

namespace mss {

// full command-line driver; returns the process exit code
// (0 ok, 2 usage, 3 numerical failure, 4 resolution failure)
int run_cli(int argc, char** argv);

}  // namespace mss
