#pragma once

#include <string>
#include <vector>

namespace foliagraph {

// Exit codes: 0 success / globally eulerian, 2 mathematical obstruction,
// 1 usage, I/O or schema error.
int run_cli(const std::vector<std::string>& args);

std::string version_string();

}  // namespace foliagraph
