#pragma once

#include "evocad/error.hpp"

#include <string>
#include <string_view>

namespace evocad::lm {

inline std::string_view trim(std::string_view s) noexcept {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos)
    return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

/// Body of the first fenced code block, or the trimmed response when there is none.
inline std::string extract_code(std::string_view response) {
  const auto open = response.find("```");
  if (open != std::string_view::npos) {
    auto body_start = response.find('\n', open + 3);
    if (body_start != std::string_view::npos) {
      ++body_start;
      auto close = response.find("```", body_start);
      std::string_view body = response.substr(
          body_start, close == std::string_view::npos ? response.npos : close - body_start);
      if (body.ends_with('\n'))
        body.remove_suffix(1);
      if (body.ends_with('\r'))
        body.remove_suffix(1);
      if (trim(body).empty())
        throw EmptyResponse("fenced code block is empty");
      return std::string(body);
    }
  }
  const auto t = trim(response);
  if (t.empty())
    throw EmptyResponse("model response is empty");
  return std::string(t);
}

} // namespace evocad::lm

namespace evocad::lm {

/// The paragraph after the last "Description:" marker, or the whole trimmed reply.
inline std::string final_description(std::string_view reply) {
  constexpr std::string_view marker = "Description:";
  const auto pos = reply.rfind(marker);
  const auto tail = trim(pos == std::string_view::npos ? reply : reply.substr(pos + marker.size()));
  if (tail.empty())
    throw EmptyResponse("description is empty");
  return std::string(tail);
}

} // namespace evocad::lm
