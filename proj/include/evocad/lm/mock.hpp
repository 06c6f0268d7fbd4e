#pragma once

// Offline stand-in for the three model roles, working on csg_mini programs.
// Every reply is a pure function of (seed, transcript).

#include "evocad/csg/program.hpp"
#include "evocad/lm/backend.hpp"
#include "evocad/lm/extract.hpp"
#include "evocad/lm/prompts.hpp"
#include "evocad/random.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace evocad::lm {

namespace mock {

inline std::optional<int> number_word(std::string_view w) {
  static constexpr std::pair<std::string_view, int> words[] = {
      {"no", 0},    {"zero", 0}, {"a", 1},    {"an", 1},    {"single", 1}, {"one", 1},
      {"two", 2},   {"three", 3}, {"four", 4}, {"five", 5},  {"six", 6},    {"seven", 7},
      {"eight", 8}, {"nine", 9}, {"ten", 10}, {"eleven", 11}, {"twelve", 12}};
  for (const auto &[k, v] : words)
    if (w == k)
      return v;
  if (!w.empty() && w.size() < 4 &&
      std::all_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c); }))
    return std::stoi(std::string(w));
  return std::nullopt;
}

/// Sum of the counts attached to mentions of "hole(s)": "two round holes and a hole".
/// Empty when no mention carries a count.
inline std::optional<int> hole_mentions(std::string_view text) {
  std::vector<std::string> tokens;
  std::vector<char> hyphen_after; // "hole-puncher" is not a hole
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      hyphen_after.push_back(c == '-');
      cur.clear();
    }
  }
  if (!cur.empty()) {
    tokens.push_back(std::move(cur));
    hyphen_after.push_back(0);
  }

  std::optional<int> total;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if ((tokens[i] != "hole" && tokens[i] != "holes") || hyphen_after[i])
      continue;
    for (std::size_t back = 1; back <= 3 && back <= i; ++back) {
      if (auto n = number_word(tokens[i - back])) {
        total = total.value_or(0) + *n;
        break;
      }
    }
  }
  return total;
}

inline int target_holes(std::string_view prompt) { return hole_mentions(prompt).value_or(0); }

inline std::optional<csg::CsgProgram> try_parse(std::string_view code) {
  try {
    return csg::parse(code);
  } catch (const Error &) {
    return std::nullopt;
  }
}

inline bool valid(const csg::CsgProgram &p) {
  try {
    csg::validate(p);
    return true;
  } catch (const Error &) {
    return false;
  }
}

struct Box2 {
  double x0, y0, x1, y1;
};

inline Box2 outline_box(const csg::Shape &s) {
  Box2 b{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
         std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  for (auto p : s.outline()) {
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

inline double span(Rng &rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

/// Adds one hole to some part at a free grid position. False when nothing fits.
inline bool add_hole(csg::CsgProgram &prog, Rng &rng) {
  const std::size_t first = rng.below(prog.parts.size());
  for (std::size_t k = 0; k < prog.parts.size(); ++k) {
    const std::size_t pi = (first + k) % prog.parts.size();
    const Box2 b = outline_box(prog.parts[pi].outer);
    const double cw = (b.x1 - b.x0) / 6, ch = (b.y1 - b.y0) / 4;
    const double s = 0.45 * std::min(cw, ch);
    csg::Shape shape = prog.parts[pi].holes.empty()
                           ? (rng.bernoulli(0.5) ? csg::Shape::rect(s, s) : csg::Shape::circ(s / 2))
                           : prog.parts[pi].holes.front().shape;
    std::vector<csg::Vec2> spots;
    for (int j = 1; j <= 3; ++j)
      for (int i = 1; i <= 5; ++i)
        spots.push_back({b.x0 + cw * i, b.y0 + ch * j});
    for (std::size_t i = spots.size(); i > 1; --i)
      std::swap(spots[i - 1], spots[rng.below(i)]);
    for (auto at : spots) {
      prog.parts[pi].holes.push_back({shape, at});
      if (valid(prog))
        return true;
      prog.parts[pi].holes.pop_back();
    }
  }
  return false;
}

inline bool remove_hole(csg::CsgProgram &prog) {
  for (auto it = prog.parts.rbegin(); it != prog.parts.rend(); ++it) {
    if (!it->holes.empty()) {
      it->holes.pop_back();
      return true;
    }
  }
  return false;
}

inline void scale_shape(csg::Shape &s, double f) {
  s.width *= f;
  s.height *= f;
  s.radius *= f;
  for (auto &p : s.points)
    p = {p.x * f, p.y * f};
}

/// Changes one size (outline or thickness) of one part, keeping the program valid.
inline void perturb(csg::CsgProgram &prog, Rng &rng) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    csg::CsgProgram next = prog;
    auto &part = next.parts[rng.below(next.parts.size())];
    const double f = span(rng, 0.85, 1.15);
    if (rng.bernoulli(0.5)) {
      part.z1 = part.z0 + (part.z1 - part.z0) * f;
    } else if (part.outer.kind == csg::Shape::Kind::Rect && rng.bernoulli(0.5)) {
      (rng.bernoulli(0.5) ? part.outer.width : part.outer.height) *= f;
    } else {
      scale_shape(part.outer, f);
    }
    if (valid(next)) {
      prog = std::move(next);
      return;
    }
  }
}

inline csg::CsgProgram fresh_program(Rng &rng, int holes) {
  for (;;) {
    csg::CsgProgram prog;
    csg::Part part;
    part.z0 = 0.0;
    part.z1 = span(rng, 0.2, 0.6);
    part.outer = rng.bernoulli(0.7) ? csg::Shape::rect(span(rng, 3.0, 5.0), span(rng, 2.0, 3.5))
                                    : csg::Shape::circ(span(rng, 1.5, 2.5));
    prog.parts.push_back(std::move(part));
    int placed = 0;
    while (placed < holes && add_hole(prog, rng))
      ++placed;
    if (placed == holes)
      return prog;
  }
}

/// Hole count for an initial program: rarely the target, otherwise any other small count.
inline int initial_hole_count(Rng &rng, int target) {
  if (rng.bernoulli(0.15))
    return target;
  const int top = std::max(4, target + 2);
  int h = static_cast<int>(rng.below(static_cast<std::uint64_t>(top)));
  return h >= target ? h + 1 : h;
}

inline std::string reply_code(const csg::CsgProgram &prog) {
  return "```csg\n" + csg::print(prog) + "```\n";
}

inline std::string program_section(const ChatMessage &m, std::string_view title) {
  auto sec = prompt_section(m.text, title);
  if (!sec)
    return {};
  try {
    return extract_code(*sec);
  } catch (const EmptyResponse &) {
    return {};
  }
}

} // namespace mock

/// Probability that a mutation moves the hole count one step toward the target.
inline constexpr double kMockToggleProbability = 0.7;

class MockBackend final : public Backend {
public:
  explicit MockBackend(std::uint64_t seed) : seed_(seed) {}

  std::string identity() const override { return "mock:" + std::to_string(seed_); }

  std::string complete(std::span<const ChatMessage> messages, const ModelRoleConfig &) override {
    Rng rng(mix64(seed_ ^ transcript_hash(messages)));
    const ChatMessage *task = task_message(messages);
    const auto target = [&] {
      auto d = prompt_section(task->text, "Object description");
      return mock::target_holes(d.value_or(""));
    };
    switch (classify_prompt(messages)) {
    case PromptKind::Init:
      return mock::reply_code(mock::fresh_program(rng, mock::initial_hole_count(rng, target())));
    case PromptKind::Describe:
      return describe(task->images.front());
    case PromptKind::Rank:
      return rank(task->text);
    case PromptKind::Crossover:
      return crossover(*task, target(), rng);
    case PromptKind::Mutation:
      return mutate(*task, target(), rng);
    case PromptKind::SelfDebug: {
      if (auto p = mock::try_parse(mock::program_section(*task, "Program")))
        return mock::reply_code(*p);
      return mock::reply_code(mock::fresh_program(rng, mock::initial_hole_count(rng, target())));
    }
    case PromptKind::Unknown:
      break;
    }
    return "I can only help with CAD programs.";
  }

  static std::uint64_t transcript_hash(std::span<const ChatMessage> messages) {
    std::string blob;
    for (const auto &m : messages) {
      blob += to_string(m.role);
      blob += '\x1f';
      blob += m.text;
      for (const auto &img : m.images) {
        blob += '\x1e';
        blob += img.provenance;
      }
      blob += '\x1d';
    }
    return fnv1a(blob);
  }

private:
  static std::string describe(const Image &img) {
    std::string out = "Step 1: The views show a flat extruded solid.\n";
    if (auto p = mock::try_parse(img.provenance)) {
      const auto n = p->hole_count();
      out += "Step 2: It is made of " + std::to_string(p->parts.size()) + " part" +
             (p->parts.size() == 1 ? "" : "s") + ".\n";
      out += "Step 3: Counting openings in the top view.\n";
      out += "Description: A solid with " + std::to_string(n) + (n == 1 ? " hole." : " holes.");
    } else {
      out += "Description: An object whose openings cannot be made out.";
    }
    return out;
  }

  static std::string rank(const std::string &text) {
    const int target = mock::target_holes(prompt_section(text, "Object description").value_or(""));
    const std::string cands = prompt_section(text, "Candidates").value_or("");
    std::vector<std::tuple<long, int>> keyed;
    std::size_t pos = 0;
    while ((pos = cands.find("[id ", pos)) != std::string::npos) {
      const std::size_t close = cands.find(']', pos);
      const int id = std::stoi(cands.substr(pos + 4, close - pos - 4));
      std::size_t next = cands.find("\n[id ", close);
      const auto body = cands.substr(close + 1, next == std::string::npos ? std::string::npos
                                                                          : next - close - 1);
      const auto n = mock::hole_mentions(body);
      keyed.emplace_back(n ? std::abs(*n - target) : std::numeric_limits<int>::max(), id);
      pos = close;
    }
    std::sort(keyed.begin(), keyed.end());
    std::string out = "[";
    for (std::size_t i = 0; i < keyed.size(); ++i)
      out += (i ? ", " : "") + std::to_string(std::get<1>(keyed[i]));
    return out + "]";
  }

  static std::string crossover(const ChatMessage &task, int target, Rng &rng) {
    auto a = mock::try_parse(mock::program_section(task, "Program A"));
    auto b = mock::try_parse(mock::program_section(task, "Program B"));
    if (!a && !b)
      return mock::reply_code(mock::fresh_program(rng, mock::initial_hole_count(rng, target)));
    if (!a || !b)
      return mock::reply_code(a ? *a : *b);
    const auto dist = [&](const csg::CsgProgram &p) {
      return std::abs(static_cast<long>(p.hole_count()) - target);
    };
    csg::CsgProgram base = dist(*b) < dist(*a) ? *b : *a;
    const csg::CsgProgram &other = dist(*b) < dist(*a) ? *a : *b;
    csg::CsgProgram tried = base;
    tried.parts.front().outer = other.parts.front().outer;
    if (!mock::valid(tried)) {
      tried = base;
      auto &p = tried.parts.front();
      p.z1 = p.z0 + (other.parts.front().z1 - other.parts.front().z0);
    }
    return mock::reply_code(mock::valid(tried) ? tried : base);
  }

  static std::string mutate(const ChatMessage &task, int target, Rng &rng) {
    auto p = mock::try_parse(mock::program_section(task, "Program"));
    if (!p)
      return mock::reply_code(mock::fresh_program(rng, mock::initial_hole_count(rng, target)));
    const long have = static_cast<long>(p->hole_count());
    bool toggled = false;
    if (rng.bernoulli(kMockToggleProbability) && have != target)
      toggled = have < target ? mock::add_hole(*p, rng) : mock::remove_hole(*p);
    if (!toggled)
      mock::perturb(*p, rng);
    return mock::reply_code(*p);
  }

  std::uint64_t seed_;
};

} // namespace evocad::lm
