#pragma once

#include "lacunary/io.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lacunary::cli {

/// Bad config or flags; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunContext {
  Json config = Json::object();
  std::filesystem::path cache_dir = ".lacunary-cache";
  std::filesystem::path out_dir = "out";
  bool no_build = false;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand and returns its exit code (0 pass or informational, 1 assertion failure).
int run_command(const std::string& name, const RunContext& ctx);

}  // namespace lacunary::cli
