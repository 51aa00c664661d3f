#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace itsm::cli {

/// Exit codes: 0 success, 1 domain diagnostics or unreadable input, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace itsm::cli
