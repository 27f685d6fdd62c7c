#pragma once

#include <string>
#include <vector>

#include "fracground/model.hpp"
#include "fracground/solver.hpp"

namespace fracground {

/// Parsed run configuration. See README for the key schema.
struct RunConfig {
  // box
  int dimension = 1;
  double side_length = 0.0;
  int points_per_dim = 0;
  int period_cells = 1;
  // model
  std::string potential_kind = "constant";  // constant | cosine_perturbed
  double v0 = 1.0;
  double amplitude = 0.0;
  std::string nonlinearity_kind = "pure_power";  // pure_power | modulated_power
  double p = 0.0;
  double modulation_amplitude = 0.0;
  bool strict = false;
  // solver
  SolveOptions solver;
  // sweep
  std::vector<double> s_list;
  std::vector<double> radii;
  std::string output_dir = ".";
  int jobs = 1;
};

/// Throws ConfigError naming the offending dotted key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

Model build_model(const RunConfig& config);

}  // namespace fracground
