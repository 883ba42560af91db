#ifndef INFLECT_TOOLS_CLI_H_
#define INFLECT_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace inflect {

// Exit codes by failure class.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,     // bad or missing arguments and paths
  kExitParse = 3,     // malformed CoNLL-U or embedding input
  kExitModel = 4,     // unreadable model or model/input mismatch
  kExitAlignment = 5, // predictions do not line up with gold
};

// Runs `inflect <subcommand> ...` with args excluding the program name.
int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace inflect

#endif  // INFLECT_TOOLS_CLI_H_
