#pragma once

// Parsed command line of `fgc gw|fgw`, echoed into the result JSON so a run
// can be reproduced from its own output.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "fgc/experiments.hpp"
#include "fgc/types.hpp"

namespace fgc::cli {

struct RunConfig {
  std::string command = "gw";  // gw | fgw
  std::string random;          // "", "1d" or "2d"
  std::size_t n = 100;         // 1D size
  std::size_t side = 10;       // 2D side
  std::optional<double> spacing;  // defaults to 1 / (points per axis - 1)
  int power = 1;
  std::string source, target, cost;  // measure / cost CSV paths
  std::string image_a, image_b;      // images for fgw
  std::string dim = "1d";            // grid of file inputs
  double epsilon = 0.002;
  std::optional<double> tau;
  double theta = 0.5;
  int iterations = 10;
  int sinkhorn_iterations = 10000;
  double tolerance = 1e-9;
  bool log_domain = true;
  std::string mode = "fast";  // fast | naive | both
  std::string execution = "serial";
  std::uint64_t seed = 7;
  std::string plan_out;
  std::string plan_format = "auto";  // auto | dense | triplets
  double threshold = 1e-12;
  std::string json_out;
  bool check_theta_zero = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& c);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Throws ConfigInvalid for inconsistent combinations.
void validate(const RunConfig& c);

SolverConfig solver_config(const RunConfig& c);

/// Builds the measures (and feature cost for fgw) the config describes.
Problem load_problem(const RunConfig& c);

}  // namespace fgc::cli
