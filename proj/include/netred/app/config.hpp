#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "netred/graphs.hpp"
#include "netred/netmodel.hpp"

namespace netred::app {

struct NodeConfig {
  std::string preset = "swing";  ///< "swing" or "explicit"
  SwingPrior prior;
  std::vector<RationalTF> explicit_nodes;
};

struct SimConfig {
  double dt = 1e-3;
  double t_end = 30.0;
  int input_node = 1;  ///< 0-based
  int output_every = 10;  ///< CSV keeps every n-th sample; comparisons use all of them
};

struct ExperimentConfig {
  WsbmParams wsbm;
  std::string graph = "sampled";  ///< "sampled" or "expected" (the expected Laplacian, seed-independent)
  NodeConfig nodes;
  RationalTF coupling = integrator();
  int k = 0;
  double eta = 10.0;
  double omega_min = 1e-3;
  int grid_size = 200;
  std::vector<std::uint64_t> seeds;
  int restarts = 50;
  SimConfig sim;
  std::vector<int> scales{1};
  std::vector<int> concentration_scales{1, 2, 4, 8};

  FreqGrid grid() const { return FreqGrid::log_spaced(omega_min, eta, grid_size); }
};

/// Throws Error(ConfigError) naming the offending field path, e.g. "eta" or
/// "wsbm.q[1][2]".
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const RationalTF& tf);

/// The three-area example with 20 seeds and the size scalings used in the
/// Monte-Carlo trend study.
ExperimentConfig three_area_config();

}  // namespace netred::app
