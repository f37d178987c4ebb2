#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sphere {

inline constexpr const char* kVersion = "0.1.0";

// Exit status: 0 success, 1 usage or other failure, 2 precondition or
// coverage error, 3 budget error, 4 replay produced different artifacts.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sphere
