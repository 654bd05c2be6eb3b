#pragma once

#include <string>

#include "driftfit/mc_harness.hpp"

namespace driftfit {

// Parses the experiment JSON (model / sampling / estimator / mc sections).
// Sections other than "model" are optional for callers that only simulate or
// only estimate.
ExperimentConfig parse_experiment_config(const std::string& json_text);

ExperimentConfig load_experiment_config(const std::string& filename);

}  // namespace driftfit
