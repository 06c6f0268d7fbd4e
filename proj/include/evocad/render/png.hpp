#pragma once

#include "evocad/error.hpp"
#include "evocad/render/image.hpp"

#include <png.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace evocad {

/// 8-bit RGB PNG bytes, no alpha.
inline std::vector<std::uint8_t> encode_png(const Image &img) {
  if (img.rgb.size() != std::size_t(img.width) * img.height * 3)
    throw ConstraintError("image buffer does not match its dimensions");
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(img.width);
  desc.height = static_cast<png_uint_32>(img.height);
  desc.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, img.rgb.data(), 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + desc.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, img.rgb.data(), 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + desc.message);
  out.resize(size);
  return out;
}

inline Image decode_png(const std::vector<std::uint8_t> &bytes) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size()))
    throw IoError(std::string("PNG decode failed: ") + desc.message);
  desc.format = PNG_FORMAT_RGB;
  Image img(static_cast<int>(desc.width), static_cast<int>(desc.height));
  if (!png_image_finish_read(&desc, nullptr, img.rgb.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw IoError(std::string("PNG decode failed: ") + desc.message);
  }
  return img;
}

inline void write_png(const Image &img, const std::filesystem::path &path) {
  const auto bytes = encode_png(img);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw IoError("write failed for " + path.string());
}

inline Image read_png(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

} // namespace evocad
