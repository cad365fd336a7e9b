#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cwmatch {

/// Full command dispatch: parses argv-style arguments, writes one JSON
/// document to `out`, diagnostics to `err`. Returns the process exit code
/// (0 ok, 2 input error, 3 limit exceeded).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cwmatch
