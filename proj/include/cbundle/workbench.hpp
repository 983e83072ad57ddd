#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbundle/cohomology.hpp"
#include "cbundle/flow.hpp"
#include "cbundle/hyperbolicity.hpp"
#include "cbundle/merofield.hpp"

namespace cbundle {

struct FactorConfig {
  bool is_matrix = false;
  char series = 'A';
  int rank = 0;
  std::vector<int> omega;
  std::vector<std::vector<std::int64_t>> matrix;  // rows of the exponent matrix
};

struct UnipotentConfig {
  int block = 1;
  std::vector<int> root;
  GaussianRational coeff;
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int samples = 200;
  double tol = 1e-9;
  double agree = 1e-6;
  double jac_min = 1e-8;
  std::string epsilon_policy = "fixed";  // or "sweep"
  GaussianRational epsilon{Rational(1)};
  int hilbert_kmax = 8;
  double sample_scale = 1.0;
  int freeness_pairs = 100;
};

struct Eq9Config {
  bool present = false;
  std::vector<std::pair<std::vector<int>, GaussianRational>> terms;
};

struct RunConfig {
  FactorConfig factor1, factor2;
  std::vector<GaussianRational> semisimple;
  std::vector<UnipotentConfig> unipotent;
  std::string lambda_mode = "specific";  // or "generic"
  ExperimentConfig experiment;
  Eq9Config eq9;
  std::vector<std::string> commands;
};

RunConfig parse_config(const std::string& text);
std::string emit_config(const RunConfig& config);  // canonical normalized form

struct RunResult {
  nlohmann::ordered_json report;
  std::string csv;      // orbit experiment rows, empty unless simulate-orbits ran
  int exit_code = 0;    // 0 ok, 2 hypothesis violation, 1 error
};

RunResult run(const RunConfig& config);

std::vector<std::string> preset_names();
RunConfig preset(const std::string& name);

}  // namespace cbundle
