#pragma once

#include <string>

namespace testsupport {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs `args` through /bin/sh with the CLI binary prepended.
RunResult run_cli(const std::string& args, const std::string& env = "");

std::string make_temp_dir();
std::string slurp(const std::string& path);

}  // namespace testsupport
