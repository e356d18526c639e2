#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dglab/lattice.hpp"

namespace dglab {

using Json = nlohmann::ordered_json;

struct RunConfig {
  // geometry
  int L = 8;
  int N = 3;
  // step distribution: "nearest-neighbour", "range-rho" (with rho) or "explicit" (with offsets)
  std::string distribution = "nearest-neighbour";
  int rho = 1;
  std::vector<Offset> offsets;
  // physics; beta and s have no defaults
  std::optional<double> beta;
  std::optional<double> s;
  double m2 = 0.0;
  double r = 1.0;
  double delta = 0.5;
  int q_max = 10;
  // numerics
  double cell_width = 1.0 / 16;
  double series_tol = 1e-10;
  double residual_tol = 1e-4;
  double range_tol = 1e-8;
  double gamma_beta_threshold = 4.0;
  double c_h = 0.1;
  double c_loc = 1.0;
  double c_kappa = 4.6e-5;
  int flow_scales = 12;
  bool zero_mode = false;
  long sweeps = 20000;
  long burn_in = 1000;
  int chains = 4;
  double window_sd = 8.0;
  std::uint64_t seed = 1;
  std::vector<int> criteria;       // validate: subset to run (empty = all)
  bool quick = false;              // validate: reduced sample counts
  std::string covariance_file;     // optional checksummed input (an earlier frd-report JSON)
  std::string out_dir = "out";
};

// Parses and validates; unknown keys and failed guards throw Error(InvalidInput) naming the inequality.
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::string& path);
// Numerics-only overrides from DGLAB_* environment variables.
void apply_env_overrides(RunConfig& c);
Json to_json(const RunConfig& c);
StepDistribution make_distribution(const RunConfig& c);

double require_beta(const RunConfig& c);
double require_s(const RunConfig& c);

}  // namespace dglab
