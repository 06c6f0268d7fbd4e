#pragma once

#include "evocad/error.hpp"
#include "evocad/lm/backend.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace evocad::evolve {

struct EvoConfig {
  int population = 6;          ///< M
  int generations = 4;         ///< N
  int few_shots = 5;           ///< k
  double mutation_prob = 0.5;  ///< p_m
  double lambda = 0.5;         ///< selection pressure
  int elites = 1;
  std::uint64_t seed = 0;
  int render_size = 256;
  int workers = lm::kDefaultInFlightCap; ///< concurrent per-individual tasks

  void validate() const {
    if (population < 2)
      throw ConfigError("population must be at least 2");
    if (generations < 0)
      throw ConfigError("generations must be non-negative");
    if (few_shots < 0)
      throw ConfigError("few_shots must be non-negative");
    if (elites < 0 || elites >= population)
      throw ConfigError("elites must be in [0, population)");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
      throw ConfigError("mutation_prob must be in [0, 1]");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw ConfigError("lambda must be positive");
    if (render_size < 64)
      throw ConfigError("render_size must be at least 64");
    if (workers < 1)
      throw ConfigError("workers must be at least 1");
  }
};

} // namespace evocad::evolve
