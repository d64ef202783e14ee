#pragma once

#include <string>

#include <json.hpp>

#include "netred/app/config.hpp"
#include "netred/reduction.hpp"

namespace netred::app {

struct CommandOptions {
  std::string out_dir = "out";
  int jobs = 1;
};

/// Runs one of generate | reduce | evaluate | simulate | experiment and
/// writes its files plus manifest.json under options.out_dir. Returns a
/// one-line summary for the terminal.
std::string run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options);

/// Reduced model as a self-contained document (enough to re-evaluate T_hat_k).
nlohmann::json reduced_model_json(const ReducedModel& reduced);

}  // namespace netred::app
