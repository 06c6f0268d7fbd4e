#pragma once

#include "evocad/csg/polygon.hpp"
#include "evocad/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace evocad::csg {

/// Vertex count used for `circ` shapes.
inline constexpr int kCircleSegments = 32;

struct Shape {
  enum class Kind { Rect, Circ, Poly };
  Kind kind = Kind::Rect;
  double width = 0.0;  ///< rect
  double height = 0.0; ///< rect
  double radius = 0.0; ///< circ
  std::vector<Vec2> points; ///< poly, as written

  static Shape rect(double w, double h) { return {Kind::Rect, w, h, 0.0, {}}; }
  static Shape circ(double r) { return {Kind::Circ, 0.0, 0.0, r, {}}; }
  static Shape poly(std::vector<Vec2> pts) { return {Kind::Poly, 0.0, 0.0, 0.0, std::move(pts)}; }

  /// Outline polygon in the orientation implied by construction (ccw for rect
  /// and circ, as written for poly), offset by `at`.
  Polygon outline(Vec2 at = {}) const {
    Polygon p;
    switch (kind) {
    case Kind::Rect: {
      const double hw = width / 2, hh = height / 2;
      p = {{at.x - hw, at.y - hh}, {at.x + hw, at.y - hh},
           {at.x + hw, at.y + hh}, {at.x - hw, at.y + hh}};
      break;
    }
    case Kind::Circ:
      for (int i = 0; i < kCircleSegments; ++i) {
        const double a = 2.0 * std::numbers::pi * i / kCircleSegments;
        p.push_back({at.x + radius * std::cos(a), at.y + radius * std::sin(a)});
      }
      break;
    case Kind::Poly:
      for (const auto &q : points)
        p.push_back(q + at);
      break;
    }
    return p;
  }

  friend bool operator==(const Shape &, const Shape &) = default;
};

struct Hole {
  Shape shape;
  Vec2 at;
  friend bool operator==(const Hole &, const Hole &) = default;
};

struct Part {
  double z0 = 0.0;
  double z1 = 1.0;
  Shape outer;
  std::vector<Hole> holes;
  friend bool operator==(const Part &, const Part &) = default;
};

/// Outer loop counter-clockwise, holes clockwise.
struct Profile {
  Polygon outer;
  std::vector<Polygon> holes;
};

struct CsgProgram {
  std::vector<Part> parts;

  std::size_t hole_count() const noexcept {
    std::size_t h = 0;
    for (const auto &p : parts)
      h += p.holes.size();
    return h;
  }
  friend bool operator==(const CsgProgram &, const CsgProgram &) = default;
};

inline Profile profile_of(const Part &part) {
  Profile prof;
  prof.outer = part.outer.outline();
  if (signed_area(prof.outer) < 0)
    std::reverse(prof.outer.begin(), prof.outer.end());
  for (const auto &h : part.holes) {
    auto loop = h.shape.outline(h.at);
    if (signed_area(loop) > 0)
      std::reverse(loop.begin(), loop.end());
    prof.holes.push_back(std::move(loop));
  }
  return prof;
}

/// Σ over parts of (2 - 2·holes): one closed genus-h surface per part.
inline long expected_chi(const CsgProgram &prog) noexcept {
  long chi = 0;
  for (const auto &p : prog.parts)
    chi += 2 - 2 * static_cast<long>(p.holes.size());
  return chi;
}

/// Throws ConstraintError when a shape is degenerate, a hole leaves its outer
/// outline, holes overlap, or two parts occupy overlapping space.
inline void validate(const CsgProgram &prog) {
  if (prog.parts.empty())
    throw ConstraintError("program has no parts");
  std::vector<Profile> profiles;
  for (std::size_t i = 0; i < prog.parts.size(); ++i) {
    const auto &part = prog.parts[i];
    const std::string where = "part " + std::to_string(i + 1) + ": ";
    if (!(std::isfinite(part.z0) && std::isfinite(part.z1)) ||
        !(part.z1 - part.z0 > kMinClearance))
      throw ConstraintError(where + "z1 must exceed z0");
    auto check_shape = [&](const Shape &s, const std::string &what) {
      const bool ok = s.kind == Shape::Kind::Rect   ? s.width > kMinClearance && s.height > kMinClearance
                      : s.kind == Shape::Kind::Circ ? s.radius > kMinClearance
                                                    : s.points.size() >= 3;
      if (!ok)
        throw ConstraintError(where + what + " has non-positive size");
    };
    check_shape(part.outer, "outer shape");
    for (const auto &h : part.holes)
      check_shape(h.shape, "hole");
    auto prof = profile_of(part);
    if (!is_simple(prof.outer))
      throw ConstraintError(where + "outer outline is not a simple polygon");
    for (std::size_t h = 0; h < prof.holes.size(); ++h) {
      const std::string hw = where + "hole " + std::to_string(h + 1);
      if (!is_simple(prof.holes[h]))
        throw ConstraintError(hw + " is not a simple polygon");
      if (!strictly_contains(prof.outer, prof.holes[h]))
        throw ConstraintError(hw + " is not strictly inside the outer outline");
      for (std::size_t g = 0; g < h; ++g)
        if (!disjoint(prof.holes[g], prof.holes[h]))
          throw ConstraintError(hw + " overlaps hole " + std::to_string(g + 1));
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto &other = prog.parts[j];
      const bool z_apart = part.z0 - other.z1 > kMinClearance ||
                           other.z0 - part.z1 > kMinClearance;
      if (!z_apart && !disjoint(profiles[j].outer, prof.outer))
        throw ConstraintError(where + "overlaps or touches part " + std::to_string(j + 1));
    }
    profiles.push_back(std::move(prof));
  }
}

namespace detail {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  CsgProgram parse() {
    CsgProgram prog;
    skip();
    while (!at_end()) {
      prog.parts.push_back(part());
      skip();
      if (peek() == ';') {
        advance();
        skip();
      }
    }
    if (prog.parts.empty())
      fail("expected at least one 'part'");
    return prog;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw SyntaxError(what, line_, column_);
  }

  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '#') {
        while (!at_end() && peek() != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  std::string_view word() {
    skip();
    const std::size_t start = pos_;
    while (!at_end() && (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      advance();
    return text_.substr(start, pos_ - start);
  }

  bool peek_word(std::string_view w) {
    skip();
    return text_.substr(pos_, w.size()) == w &&
           (pos_ + w.size() >= text_.size() ||
            !std::isalnum(static_cast<unsigned char>(text_[pos_ + w.size()])));
  }

  void expect_word(std::string_view w) {
    const int line = line_, col = column_;
    if (word() != w)
      throw SyntaxError("expected '" + std::string(w) + "'", line, col);
  }

  void expect_char(char c) {
    skip();
    if (peek() != c)
      fail(std::string("expected '") + c + "'");
    advance();
  }

  bool number_ahead() {
    skip();
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }

  double number() {
    skip();
    const std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '.' ||
                         peek() == '-' || peek() == '+'))
      pos_++, column_++;
    std::string_view tok = text_.substr(start, pos_ - start);
    const int col = column_ - static_cast<int>(tok.size());
    if (!tok.empty() && tok.front() == '+')
      tok.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      throw SyntaxError("expected a number", line_, col);
    return v;
  }

  Shape shape() {
    const int line = line_;
    skip();
    const int col = column_;
    const auto kind = word();
    if (kind == "rect") {
      const double w = number();
      return Shape::rect(w, number());
    }
    if (kind == "circ")
      return Shape::circ(number());
    if (kind == "poly") {
      std::vector<Vec2> pts;
      while (true) {
        skip();
        const bool paren = peek() == '(';
        if (paren)
          advance();
        else if (!number_ahead())
          break;
        const double x = number();
        const double y = number();
        pts.push_back({x, y});
        if (paren)
          expect_char(')');
      }
      if (pts.size() < 3)
        throw SyntaxError("poly needs at least 3 points", line, col);
      return Shape::poly(std::move(pts));
    }
    throw SyntaxError("expected a shape (rect, circ, poly)", line, col);
  }

  Part part() {
    expect_word("part");
    expect_word("z");
    Part p;
    p.z0 = number();
    p.z1 = number();
    expect_char('{');
    p.outer = shape();
    while (true) {
      skip();
      if (peek() == ';') {
        advance();
        continue;
      }
      if (peek() == '}') {
        advance();
        break;
      }
      if (at_end())
        fail("unterminated part: expected '}'");
      expect_word("hole");
      Hole h;
      h.shape = shape();
      expect_word("at");
      h.at.x = number();
      h.at.y = number();
      p.holes.push_back(std::move(h));
      skip();
      if (peek() != ';' && peek() != '}')
        fail("expected ';' or '}'");
    }
    return p;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

inline std::string format_number(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string format_shape(const Shape &s) {
  switch (s.kind) {
  case Shape::Kind::Rect:
    return "rect " + format_number(s.width) + " " + format_number(s.height);
  case Shape::Kind::Circ:
    return "circ " + format_number(s.radius);
  case Shape::Kind::Poly: {
    std::string out = "poly";
    for (const auto &p : s.points)
      out += " " + format_number(p.x) + " " + format_number(p.y);
    return out;
  }
  }
  return {};
}

} // namespace detail

/// Parse and validate. SyntaxError carries line/column; ConstraintError
/// reports geometric violations.
inline CsgProgram parse(std::string_view text) {
  auto prog = detail::Parser(text).parse();
  validate(prog);
  return prog;
}

/// Canonical text; parse(print(p)) == p.
inline std::string print(const CsgProgram &prog) {
  std::string out;
  for (const auto &p : prog.parts) {
    out += "part z " + detail::format_number(p.z0) + " " + detail::format_number(p.z1) + " {\n";
    out += "  " + detail::format_shape(p.outer) + ";\n";
    for (const auto &h : p.holes)
      out += "  hole " + detail::format_shape(h.shape) + " at " +
             detail::format_number(h.at.x) + " " + detail::format_number(h.at.y) + ";\n";
    out += "}\n";
  }
  return out;
}

} // namespace evocad::csg
