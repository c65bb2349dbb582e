#pragma once

#include <string>
#include <vector>

#include "hypolab/cli/config.hpp"
#include "hypolab/cli/report.hpp"

namespace hypolab::cli {

struct ExperimentInfo {
  std::string name;
  std::string claim;
  std::vector<int> criteria;  // acceptance criteria its checks belong to
};

const std::vector<ExperimentInfo>& experiments();

/// Runs one experiment. Unknown names, unknown keys and out-of-range values
/// raise ConfigError; module precondition failures are rethrown as
/// ConfigError with the experiment name prepended.
Report run_experiment(const std::string& name, Config& cfg);

}  // namespace hypolab::cli
