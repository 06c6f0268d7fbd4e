#pragma once

#include "evocad/lm/message.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace evocad::lm {

/// Bumped whenever any template text below changes.
inline constexpr std::string_view kTemplateVersion = "evocad-prompts/1";

/// The CAD language the generator is asked to write.
struct CadLanguage {
  std::string name;
  std::string fence;     ///< info string for fenced blocks
  std::string reference; ///< short language reference placed in the system message
};

inline CadLanguage csg_mini_language() {
  return {"csg_mini", "csg",
          "A program is a list of parts. Each part is an extrusion between two heights:\n"
          "  part z <z0> <z1> {\n"
          "    <outer shape>;\n"
          "    hole <shape> at <x> <y>;\n"
          "  }\n"
          "Shapes: `rect <w> <h>` centered at the origin, `circ <r>`, and "
          "`poly <x1> <y1> <x2> <y2> ...` for a simple polygon.\n"
          "Holes cut straight through their part, must lie strictly inside the outer shape "
          "and must not touch each other. Parts must not overlap. Lines starting with # "
          "are comments."};
}

inline CadLanguage cadquery_language() {
  return {"CadQuery", "python",
          "Write a Python script using the CadQuery library. Assign the final solid to a "
          "variable named `result`. Do not export or display anything."};
}

struct FewShot {
  std::string name;
  std::string code;
};

using ParentView = std::pair<std::string, std::string>; ///< (code, description)

namespace detail {

inline std::string fenced(const CadLanguage &lang, std::string_view code) {
  std::string out = "```" + lang.fence + "\n";
  out += code;
  if (out.back() != '\n')
    out += '\n';
  out += "```\n";
  return out;
}

inline std::string generator_system(const CadLanguage &lang) {
  return "You are an expert CAD engineer who writes " + lang.name +
         " programs that build 3D objects.\n\n" + lang.reference;
}

inline constexpr std::string_view kCodeOnly =
    "Reply with a single fenced code block containing only the program.";

} // namespace detail

inline std::vector<ChatMessage> build_init_prompt(std::string_view user_prompt,
                                                  std::span<const FewShot> shots,
                                                  const CadLanguage &lang = csg_mini_language()) {
  std::string u = "Write a " + lang.name + " program for the object described below. ";
  u += detail::kCodeOnly;
  u += "\n";
  for (std::size_t i = 0; i < shots.size(); ++i) {
    u += "\n## Example " + std::to_string(i + 1) + "\n";
    u += detail::fenced(lang, shots[i].code);
  }
  u += "\n## Object description\n";
  u += user_prompt;
  u += "\n";
  return {{Role::System, detail::generator_system(lang)}, {Role::User, std::move(u)}};
}

inline std::vector<ChatMessage> build_describe_prompt(const Image &img) {
  std::string u =
      "The image shows one 3D object rendered from four directions: isometric, front, top "
      "and right.\n"
      "Think step by step. First describe the overall shape and its proportions. Then list "
      "its separate parts. Then count the holes that pass through the object and say where "
      "they are.\n"
      "Finish with a line starting with `Description:` followed by one paragraph that "
      "describes the object.\n";
  return {{Role::User, std::move(u), {img}}};
}

inline std::vector<ChatMessage> build_rank_prompt(
    std::string_view user_prompt, std::span<const std::pair<int, std::string>> descriptions) {
  std::string u =
      "Several candidate objects were described in words. Rank all candidates from the one "
      "that best matches the object description to the one that matches it worst.\n"
      "Reply with only a JSON array of candidate ids, best first, for example [3, 1, 2]. "
      "Every id must appear exactly once.\n";
  u += "\n## Object description\n";
  u += user_prompt;
  u += "\n\n## Candidates\n";
  for (const auto &[id, text] : descriptions) {
    u += "\n[id " + std::to_string(id) + "]\n";
    u += text;
    u += "\n";
  }
  return {{Role::System, "You judge how well CAD objects match a written specification."},
          {Role::User, std::move(u)}};
}

inline constexpr std::string_view kRankReask =
    "Your reply was not a JSON array containing every candidate id exactly once. Reply with "
    "only the JSON array.";

inline std::vector<ChatMessage> build_crossover_prompt(
    const ParentView &a, const ParentView &b, std::string_view user_prompt,
    const CadLanguage &lang = csg_mini_language()) {
  std::string u =
      "Two candidate programs were written for the object described below. Analyze the "
      "similarities, strengths and weaknesses of both programs with respect to the "
      "description. Then combine them in a complementary way into one improved program. ";
  u += detail::kCodeOnly;
  u += "\n\n## Object description\n";
  u += user_prompt;
  u += "\n\n## Program A\n" + detail::fenced(lang, a.first);
  u += "\n## Description of A\n" + a.second + "\n";
  u += "\n## Program B\n" + detail::fenced(lang, b.first);
  u += "\n## Description of B\n" + b.second + "\n";
  return {{Role::System, detail::generator_system(lang)}, {Role::User, std::move(u)}};
}

inline std::vector<ChatMessage> build_mutation_prompt(std::string_view code,
                                                      std::string_view user_prompt,
                                                      const CadLanguage &lang = csg_mini_language()) {
  std::string u = "Refine and improve the program below so that the object it builds matches "
                  "the object description more closely. ";
  u += detail::kCodeOnly;
  u += "\n\n## Object description\n";
  u += user_prompt;
  u += "\n\n## Program\n" + detail::fenced(lang, code);
  return {{Role::System, detail::generator_system(lang)}, {Role::User, std::move(u)}};
}

inline std::vector<ChatMessage> build_selfdebug_prompt(std::string_view code,
                                                       std::string_view compiler_error,
                                                       std::string_view user_prompt,
                                                       const CadLanguage &lang = csg_mini_language()) {
  if (compiler_error.empty())
    throw ConstraintError("self-debug prompt needs the error message");
  std::string u = "The program below failed with the error shown. Fix the program so that it "
                  "runs and still builds the described object. ";
  u += detail::kCodeOnly;
  u += "\n\n## Object description\n";
  u += user_prompt;
  u += "\n\n## Program\n" + detail::fenced(lang, code);
  u += "\n## Error\n";
  u += compiler_error;
  u += "\n";
  return {{Role::System, detail::generator_system(lang)}, {Role::User, std::move(u)}};
}

enum class PromptKind { Init, Describe, Rank, Crossover, Mutation, SelfDebug, Unknown };

/// Body of the `## <title>` section, up to the next heading. Empty optional if absent.
inline std::optional<std::string> prompt_section(std::string_view text, std::string_view title) {
  const std::string head = "## " + std::string(title) + "\n";
  std::size_t pos = 0;
  if (text.starts_with(head)) {
    pos = head.size();
  } else {
    pos = text.find("\n" + head);
    if (pos == std::string_view::npos)
      return std::nullopt;
    pos += head.size() + 1;
  }
  std::size_t end = text.find("\n## ", pos);
  std::string_view body = text.substr(pos, end == std::string_view::npos ? text.npos : end - pos);
  while (!body.empty() && (body.back() == '\n' || body.back() == ' '))
    body.remove_suffix(1);
  return std::string(body);
}

/// First user message of a transcript, the one that carries the task.
inline const ChatMessage *task_message(std::span<const ChatMessage> messages) {
  for (const auto &m : messages)
    if (m.role == Role::User)
      return &m;
  return nullptr;
}

inline PromptKind classify_prompt(std::span<const ChatMessage> messages) {
  const ChatMessage *m = task_message(messages);
  if (!m)
    return PromptKind::Unknown;
  if (!m->images.empty())
    return PromptKind::Describe;
  const auto has = [&](std::string_view t) { return prompt_section(m->text, t).has_value(); };
  if (has("Candidates"))
    return PromptKind::Rank;
  if (has("Program A") && has("Program B"))
    return PromptKind::Crossover;
  if (has("Error"))
    return PromptKind::SelfDebug;
  if (has("Program"))
    return PromptKind::Mutation;
  if (has("Object description"))
    return PromptKind::Init;
  return PromptKind::Unknown;
}

} // namespace evocad::lm
