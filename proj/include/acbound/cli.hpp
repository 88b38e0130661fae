#ifndef ACBOUND_CLI_HPP
#define ACBOUND_CLI_HPP

#include <string>
#include <vector>

namespace acbound {

inline constexpr const char* kVersion = "0.1.0";

// Entry point behind the binary; exposed so tests can drive the CLI in-process.
// Exit codes: 0 success, 1 verification failure, 2 usage/config error.
int cli_main(const std::vector<std::string>& args);

} // namespace acbound

#endif
