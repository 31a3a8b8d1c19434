#ifndef MRSIM_CLI_HPP
#define MRSIM_CLI_HPP

#include <string>
#include <vector>

namespace mrsim {

// Exit codes: 0 success, 1 usage/config error, 2 safety violation under
// --strict, 3 numerical divergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitSafety = 2;
inline constexpr int kExitDivergence = 3;

int cli_main(const std::vector<std::string>& args);

}  // namespace mrsim

#endif
