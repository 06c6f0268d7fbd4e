#pragma once

#include "evocad/csg/compile.hpp"
#include "evocad/geometry/mesh.hpp"
#include "evocad/lm/prompts.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace evocad::bridge {

/// Outcome of turning program text into a mesh. `error` is never empty on failure.
struct RenderResult {
  std::optional<TriMesh> mesh;
  std::string artifact;
  std::string error;

  bool ok() const noexcept { return mesh.has_value(); }

  static RenderResult success(TriMesh m, std::string artifact = {}) {
    return {std::move(m), std::move(artifact), {}};
  }
  static RenderResult failure(std::string error) {
    if (error.empty())
      error = "unknown error";
    return {std::nullopt, {}, std::move(error)};
  }
};

/// Program text to mesh. Implementations never throw out of render().
class Engine {
public:
  virtual ~Engine() = default;
  virtual RenderResult render(std::string_view code) = 0;
  virtual lm::CadLanguage language() const = 0;
};

class CsgEngine final : public Engine {
public:
  RenderResult render(std::string_view code) override {
    try {
      auto mesh = csg::compile(csg::parse(code));
      if (mesh.faces().empty())
        return RenderResult::failure("program produced an empty mesh");
      return RenderResult::success(std::move(mesh));
    } catch (const std::exception &e) {
      return RenderResult::failure(e.what());
    }
  }
  lm::CadLanguage language() const override { return lm::csg_mini_language(); }
};

} // namespace evocad::bridge
