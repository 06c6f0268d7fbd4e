#pragma once

#include "evocad/geometry/mesh.hpp"
#include "evocad/render/image.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evocad::evolve {

struct Lineage {
  std::vector<int> parents;
  std::string op = "init"; ///< init, crossover, crossover+mutation
};

struct Individual {
  int id = 0;
  std::string code;
  std::optional<TriMesh> mesh; ///< set when the code compiled
  std::string error;           ///< compile or backend error when it did not
  bool self_debugged = false;
  std::optional<Image> image;
  std::optional<std::string> description;
  std::optional<double> avg_rank;
  Lineage lineage;

  bool ok() const noexcept { return mesh.has_value(); }
};

using Population = std::vector<Individual>;

} // namespace evocad::evolve
