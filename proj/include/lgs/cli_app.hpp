#pragma once

#include <string>
#include <vector>

namespace lgs {

inline constexpr const char* kToolVersion = "0.1.0";

// Entry point behind the `lgs` binary; also callable in-process from tests.
int run_cli(const std::vector<std::string>& args);

} // namespace lgs
