#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace wtcpir::cli {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitAuditFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitConstruction = 3;

// Runs one invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace wtcpir::cli
