#include "dglab/config.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "dglab/common.hpp"

namespace dglab {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

template <typename T>
void read(const Json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(std::string("config key '") + key + "' has the wrong type");
  }
}

void guard(bool ok, const std::string& inequality) {
  if (!ok) fail("config guard violated: " + inequality);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k{"L", "N", "J", "rho", "offsets", "beta", "s", "m2", "r", "delta", "q_max",
                                       "numerics", "seed", "out", "covariance_file", "criteria", "quick",
                                       "sweeps", "burn_in", "chains"};
  return k;
}

const std::set<std::string>& numeric_keys() {
  static const std::set<std::string> k{"cell_width", "series_tol", "residual_tol", "range_tol",
                                       "gamma_beta_threshold", "c_h", "c_loc", "c_kappa", "flow_scales",
                                       "zero_mode", "window_sd"};
  return k;
}

void validate(const RunConfig& c) {
  guard(c.L >= 2, "L >= 2 (got " + std::to_string(c.L) + ")");
  guard(c.N >= 1, "N >= 1 (got " + std::to_string(c.N) + ")");
  guard(std::pow(double(c.L), c.N) <= 4096.0, "L^N <= 4096");
  guard(c.m2 >= 0.0 && c.m2 <= 1.0, "0 <= m2 <= 1");
  guard(c.r > 0.0, "r > 0");
  guard(c.delta > 0.0, "delta > 0");
  guard(c.q_max >= 1 && c.q_max <= 64, "1 <= q_max <= 64");
  guard(c.cell_width > 0.0, "cell_width > 0");
  guard(c.series_tol > 0.0 && c.series_tol < 1.0, "0 < series_tol < 1");
  guard(c.flow_scales >= 1 && c.flow_scales <= 40, "1 <= flow_scales <= 40");
  guard(c.window_sd >= 6.0, "window_sd >= 6");
  guard(c.sweeps > 0 && c.burn_in >= 0 && c.chains >= 1, "sweeps > 0, burn_in >= 0, chains >= 1");
  guard(c.c_kappa > 0.0 && c.c_h > 0.0 && c.c_loc > 0.0, "c_kappa, c_h, c_loc > 0");
  if (c.beta) guard(*c.beta > 0.0, "beta > 0");
  if (c.distribution == "range-rho") guard(c.rho >= 1, "rho >= 1");
  if (c.distribution == "explicit") guard(!c.offsets.empty(), "explicit distribution needs offsets");
  if (c.s) {
    StepDistribution J = make_distribution(c);
    guard(std::abs(*c.s) < J.theta,
          "|s| < theta_J (|s| = " + std::to_string(std::abs(*c.s)) + ", theta_J = " + std::to_string(J.theta) + ")");
  }
  for (int k : c.criteria) guard(k >= 1 && k <= 15, "criteria ids in 1..15");
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) fail("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known_keys().count(it.key())) fail("unknown config key '" + it.key() + "'");
  RunConfig c;
  read(j, "L", c.L);
  read(j, "N", c.N);
  read(j, "J", c.distribution);
  read(j, "rho", c.rho);
  if (j.contains("offsets")) {
    std::vector<std::array<int, 2>> o;
    read(j, "offsets", o);
    for (auto [a, b] : o) c.offsets.emplace_back(a, b);
  }
  if (j.contains("beta")) c.beta = j.at("beta").is_number() ? j.at("beta").get<double>() : (fail("beta must be a number"), 0.0);
  if (j.contains("s")) c.s = j.at("s").is_number() ? j.at("s").get<double>() : (fail("s must be a number"), 0.0);
  read(j, "m2", c.m2);
  read(j, "r", c.r);
  read(j, "delta", c.delta);
  read(j, "q_max", c.q_max);
  read(j, "seed", c.seed);
  read(j, "out", c.out_dir);
  read(j, "covariance_file", c.covariance_file);
  read(j, "criteria", c.criteria);
  read(j, "quick", c.quick);
  read(j, "sweeps", c.sweeps);
  read(j, "burn_in", c.burn_in);
  read(j, "chains", c.chains);
  if (j.contains("numerics")) {
    const Json& n = j.at("numerics");
    if (!n.is_object()) fail("numerics must be an object");
    for (auto it = n.begin(); it != n.end(); ++it)
      if (!numeric_keys().count(it.key())) fail("unknown numerics key '" + it.key() + "'");
    read(n, "cell_width", c.cell_width);
    read(n, "series_tol", c.series_tol);
    read(n, "residual_tol", c.residual_tol);
    read(n, "range_tol", c.range_tol);
    read(n, "gamma_beta_threshold", c.gamma_beta_threshold);
    read(n, "c_h", c.c_h);
    read(n, "c_loc", c.c_loc);
    read(n, "c_kappa", c.c_kappa);
    read(n, "flow_scales", c.flow_scales);
    read(n, "zero_mode", c.zero_mode);
    read(n, "window_sd", c.window_sd);
  }
  if (c.distribution != "nearest-neighbour" && c.distribution != "range-rho" && c.distribution != "explicit")
    fail("J must be one of nearest-neighbour, range-rho, explicit");
  apply_env_overrides(c);
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

void apply_env_overrides(RunConfig& c) {
  auto num = [](const char* name, auto& dst) {
    const char* v = std::getenv(name);
    if (!v || !*v) return;
    std::istringstream is(v);
    std::decay_t<decltype(dst)> x{};
    if (!(is >> x) || !is.eof()) fail(std::string("bad value in ") + name);
    dst = x;
  };
  num("DGLAB_CELL_WIDTH", c.cell_width);
  num("DGLAB_SERIES_TOL", c.series_tol);
  num("DGLAB_RESIDUAL_TOL", c.residual_tol);
  num("DGLAB_RANGE_TOL", c.range_tol);
  num("DGLAB_WINDOW_SD", c.window_sd);
  num("DGLAB_SWEEPS", c.sweeps);
  num("DGLAB_CHAINS", c.chains);
}

Json to_json(const RunConfig& c) {
  Json j;
  j["L"] = c.L;
  j["N"] = c.N;
  j["J"] = c.distribution;
  if (c.distribution == "range-rho") j["rho"] = c.rho;
  if (c.distribution == "explicit") {
    Json o = Json::array();
    for (const auto& x : c.offsets) o.push_back({x(0), x(1)});
    j["offsets"] = o;
  }
  j["beta"] = c.beta ? Json(*c.beta) : Json(nullptr);
  j["s"] = c.s ? Json(*c.s) : Json(nullptr);
  j["m2"] = c.m2;
  j["r"] = c.r;
  j["delta"] = c.delta;
  j["q_max"] = c.q_max;
  j["seed"] = c.seed;
  j["sweeps"] = c.sweeps;
  j["burn_in"] = c.burn_in;
  j["chains"] = c.chains;
  j["quick"] = c.quick;
  j["criteria"] = c.criteria;
  if (!c.covariance_file.empty()) j["covariance_file"] = c.covariance_file;
  j["numerics"] = {{"cell_width", c.cell_width},
                   {"series_tol", c.series_tol},
                   {"residual_tol", c.residual_tol},
                   {"range_tol", c.range_tol},
                   {"gamma_beta_threshold", c.gamma_beta_threshold},
                   {"c_h", c.c_h},
                   {"c_loc", c.c_loc},
                   {"c_kappa", c.c_kappa},
                   {"flow_scales", c.flow_scales},
                   {"zero_mode", c.zero_mode},
                   {"window_sd", c.window_sd}};
  return j;
}

StepDistribution make_distribution(const RunConfig& c) {
  if (c.distribution == "nearest-neighbour") return nearest_neighbour();
  if (c.distribution == "range-rho") return standard_range_rho(c.rho);
  return make_step_distribution(c.offsets, "explicit");
}

double require_beta(const RunConfig& c) {
  if (!c.beta) fail("beta must be given explicitly");
  return *c.beta;
}

double require_s(const RunConfig& c) {
  if (!c.s) fail("s must be given explicitly");
  return *c.s;
}

}  // namespace dglab
