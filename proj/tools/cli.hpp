#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace camdp::cli {

// args excludes the program name. Returns the process exit code:
// 0 ok / converged, 1 usage, parse or validation error, 2 cycling,
// 3 max_iters.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace camdp::cli
