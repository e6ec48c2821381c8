#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nemato/functionals.hpp"
#include "nemato/solver.hpp"

namespace nemato {

// Aggregates every problem found in a config file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues_)
      : std::runtime_error(join(issues_)), issues(std::move(issues_)) {}
  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "invalid configuration:";
    for (const auto& i : v) s += "\n  - " + i;
    return s;
  }
};

struct ExperimentConfig {
  int mesh_n = 8;
  std::vector<std::string> lambda_sides{"left"};
  std::vector<std::string> sigma_sides{"right"};
  std::optional<Box> confinement;

  NFunction nfunction = NFunction::power(2.0);
  double mu = 1.0;
  double zeta = 2.0;
  SigmaFunction sigma = SigmaFunction::reference();

  LoadSet loads;
  BoundaryDatum datum = BoundaryDatum::identity();

  double T = 1.0;
  int n_steps = 20;
  SolverConfig solver;

  Vec m0{0.0, 1.0};
  std::uint64_t seed = 1;

  MaterialModel material() const { return MaterialModel(nfunction, mu, zeta, sigma, 2); }
  Mesh make_mesh() const { return Mesh::unit_square(mesh_n, lambda_sides, sigma_sides); }
};

// Parses the key = value / [section] format; collects all issues and throws
// a single ConfigError naming each offending key. The NEMATO_SEED
// environment variable, when set, overrides the configured seed.
ExperimentConfig parse_config(const std::string& text);

}  // namespace nemato
