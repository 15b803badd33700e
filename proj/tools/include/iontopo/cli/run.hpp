#pragma once

#include <string>
#include <vector>

#include "iontopo/cli/config.hpp"

namespace iontopo::cli {

struct RunReport {
  std::string directory;
  std::vector<std::string> files;  // relative to directory, manifest excluded
  std::string outputs_digest;
  std::string config_hash;
  double wall_time_s = 0.0;
};

// Executes the command and writes its artifacts plus manifest.json into
// `directory`. Library exceptions propagate.
RunReport run(const RunConfig& config, const std::string& directory);

// Maps an exception to the process exit code: config 2, numerical 3, I/O 4.
int exit_code_for(const std::exception& e);

}  // namespace iontopo::cli
