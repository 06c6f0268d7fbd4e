#pragma once

#include "evocad/error.hpp"
#include "evocad/render/image.hpp"

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace evocad::lm {

enum class Role { System, User, Assistant };

inline std::string_view to_string(Role r) noexcept {
  switch (r) {
  case Role::System:
    return "system";
  case Role::User:
    return "user";
  case Role::Assistant:
    return "assistant";
  }
  return "user";
}

struct ChatMessage {
  Role role = Role::User;
  std::string text;
  std::vector<Image> images;

  ChatMessage(Role r, std::string t, std::vector<Image> imgs = {})
      : role(r), text(std::move(t)), images(std::move(imgs)) {
    if (text.empty() && images.empty())
      throw ConstraintError("chat message needs text or an image");
  }
};

using Transcript = std::vector<ChatMessage>;

/// The three model roles of the search loop.
enum class ModelRole { Generator, Describer, Ranker };

inline std::string_view to_string(ModelRole r) noexcept {
  switch (r) {
  case ModelRole::Generator:
    return "generator";
  case ModelRole::Describer:
    return "describer";
  case ModelRole::Ranker:
    return "ranker";
  }
  return "generator";
}

/// Sampling temperature for evaluation roles (describe, rank).
inline constexpr double kEvaluationTemperature = 0.2;
/// Sampling temperature for generative roles (init, crossover, mutation).
inline constexpr double kGenerativeTemperature = 0.5;

struct ModelRoleConfig {
  ModelRole role = ModelRole::Generator;
  std::string model_name = "mock";
  double temperature = kGenerativeTemperature;
  int max_retries = 3;
  std::chrono::milliseconds timeout{60'000};

  static ModelRoleConfig defaults(ModelRole role, std::string model = "mock") {
    ModelRoleConfig c;
    c.role = role;
    c.model_name = std::move(model);
    c.temperature = role == ModelRole::Generator ? kGenerativeTemperature : kEvaluationTemperature;
    return c;
  }
};

} // namespace evocad::lm
