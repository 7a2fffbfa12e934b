#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "normsol/domain_potential.hpp"
#include "normsol/minmax.hpp"
#include "normsol/one_dim.hpp"
#include "normsol/saddle.hpp"
#include "normsol/scaling_laws.hpp"

namespace normsol {

enum class Suite { ground_state, scaling_check, interaction, landmarks, solve, one_dim, verify_all };
Suite parse_suite(const std::string& s);
std::string to_string(Suite s);

struct Tolerances {
  double identity = 1e-6;
  double scaling = 1e-6;
  double decay = 0.01;
  double interaction = 0.02;
  double solve = 1e-5;
  double newton = 1e-10;
  double drift = 2.0;
  double scale = 1.0;  // --tol-scale multiplies every entry above
};

struct ExperimentConfig {
  ModelParams params;
  ExteriorDomainSpec domain;
  PotentialSpec potential;
  GridSpec grid;
  Suite suite = Suite::verify_all;
  Tolerances tol;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";

  std::vector<double> r_values{8, 12, 16, 20};
  int sigma_points = 64;
  int t_points = 21;
  int c0_max_iter = 1500;
  std::vector<double> k_values{0.25, 0.5, 0.75};
  double interaction_t = 0.3;
  std::vector<double> interaction_r{16, 20, 24};
  OneDimConfig one_dim;

  std::string source_text;  // raw file, hashed into every report
  std::uint64_t hash() const;
  std::string hash_hex() const;
};

struct ConfigError : std::runtime_error {
  int line;
  std::string field;
  ConfigError(int line_, std::string field_, const std::string& what)
      : std::runtime_error(what), line(line_), field(std::move(field_)) {}
};

// flat INI: [section] then key = value; numbers lists are comma separated
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace normsol
