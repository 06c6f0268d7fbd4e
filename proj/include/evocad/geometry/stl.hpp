#pragma once

#include "evocad/error.hpp"
#include "evocad/geometry/mesh.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

namespace evocad {

namespace detail {

inline std::uint32_t read_u32_le(const unsigned char *p) noexcept {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

inline float read_f32_le(const unsigned char *p) noexcept {
  return std::bit_cast<float>(read_u32_le(p));
}

inline void put_u32_le(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32_le(std::string &out, float f) {
  put_u32_le(out, std::bit_cast<std::uint32_t>(f));
}

inline bool looks_ascii(std::string_view bytes) {
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i])))
    ++i;
  return bytes.substr(i, 5) == "solid";
}

inline std::vector<Triangle> parse_binary_stl(std::string_view bytes) {
  if (bytes.size() < 84)
    throw MalformedStl("binary STL shorter than its 84-byte header", bytes.size());
  const auto *data = reinterpret_cast<const unsigned char *>(bytes.data());
  const std::uint32_t count = read_u32_le(data + 80);
  const std::size_t need = 84 + std::size_t(count) * 50;
  if (bytes.size() < need) {
    const std::size_t whole = (bytes.size() - 84) / 50;
    throw MalformedStl("binary STL declares " + std::to_string(count) +
                           " facets but is truncated",
                       84 + whole * 50);
  }
  std::vector<Triangle> tris;
  tris.reserve(count);
  for (std::uint32_t f = 0; f < count; ++f) {
    const unsigned char *p = data + 84 + std::size_t(f) * 50 + 12; // skip normal
    Triangle t;
    for (int c = 0; c < 3; ++c) {
      t[c] = {read_f32_le(p), read_f32_le(p + 4), read_f32_le(p + 8)};
      if (!is_finite(t[c]))
        throw MalformedStl("non-finite coordinate",
                           84 + std::size_t(f) * 50 + 12 + 12 * c);
      p += 12;
    }
    tris.push_back(t);
  }
  return tris;
}

class AsciiStlReader {
public:
  explicit AsciiStlReader(std::string_view text) : text_(text) {}

  std::vector<Triangle> parse() {
    expect("solid");
    skip_line(); // optional name
    std::vector<Triangle> tris;
    while (true) {
      const auto word = next_token();
      if (word == "endsolid")
        break;
      if (word != "facet")
        fail("expected 'facet' or 'endsolid'");
      expect("normal");
      for (int i = 0; i < 3; ++i)
        number(); // discarded; recomputed from winding
      expect("outer");
      expect("loop");
      Triangle t;
      for (int c = 0; c < 3; ++c) {
        expect("vertex");
        t[c] = {number(), number(), number()};
      }
      expect("endloop");
      expect("endfacet");
      tris.push_back(t);
    }
    return tris;
  }

private:
  [[noreturn]] void fail(const std::string &what) const {
    throw MalformedStl("ASCII STL: " + what, token_start_);
  }

  std::string_view next_token() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    token_start_ = pos_;
    if (pos_ >= text_.size())
      fail("unexpected end of input");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n')
      ++pos_;
  }

  void expect(std::string_view word) {
    if (next_token() != word)
      fail("expected '" + std::string(word) + "'");
  }

  double number() {
    const auto tok = next_token();
    double v = 0.0;
    const char *first = tok.data();
    if (!tok.empty() && tok.front() == '+')
      ++first;
    const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
      fail("non-numeric token '" + std::string(tok) + "'");
    return v;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t token_start_ = 0;
};

} // namespace detail

/// Parse binary or ASCII STL bytes into a welded mesh. File normals are
/// ignored. A file is read as binary when its size matches the facet count in
/// the binary header, even if the header starts with "solid".
inline TriMesh load_stl(std::string_view bytes) {
  if (bytes.size() >= 84) {
    const auto count =
        detail::read_u32_le(reinterpret_cast<const unsigned char *>(bytes.data()) + 80);
    if (84 + std::size_t(count) * 50 == bytes.size())
      return weld_vertices(detail::parse_binary_stl(bytes));
  }
  if (detail::looks_ascii(bytes))
    return weld_vertices(detail::AsciiStlReader(bytes).parse());
  return weld_vertices(detail::parse_binary_stl(bytes));
}

inline std::string read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline TriMesh load_stl_file(const std::filesystem::path &path) {
  return load_stl(read_file_bytes(path));
}

/// Binary STL with normals recomputed from winding.
inline std::string write_stl(const TriMesh &mesh,
                             std::string_view header = "evocad binary stl") {
  std::string out(80, '\0');
  std::memcpy(out.data(), header.data(), std::min<std::size_t>(header.size(), 80));
  detail::put_u32_le(out, static_cast<std::uint32_t>(mesh.faces().size()));
  out.reserve(84 + mesh.faces().size() * 50);
  for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
    const auto t = mesh.triangle(f);
    const Vec3 n = normalized(cross(t[1] - t[0], t[2] - t[0]));
    for (double c : {n.x, n.y, n.z})
      detail::put_f32_le(out, static_cast<float>(c));
    for (const auto &p : t)
      for (double c : {p.x, p.y, p.z})
        detail::put_f32_le(out, static_cast<float>(c));
    out.push_back('\0');
    out.push_back('\0');
  }
  return out;
}

inline void write_stl_file(const TriMesh &mesh, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  const auto bytes = write_stl(mesh);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed for " + path.string());
}

} // namespace evocad
