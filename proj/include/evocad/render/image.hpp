#pragma once

#include "evocad/error.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace evocad {

/// 8-bit RGB raster, row-major from the top-left pixel.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
  /// Out-of-band tag naming what was rendered (e.g. the source program). Not
  /// part of the pixels and never encoded into PNG.
  std::string provenance;

  Image() = default;
  Image(int w, int h, std::array<std::uint8_t, 3> fill = {0, 0, 0})
      : width(w), height(h), rgb(std::size_t(w) * h * 3) {
    if (w <= 0 || h <= 0)
      throw ConstraintError("image dimensions must be positive");
    for (std::size_t i = 0; i < rgb.size(); i += 3) {
      rgb[i] = fill[0];
      rgb[i + 1] = fill[1];
      rgb[i + 2] = fill[2];
    }
  }

  std::array<std::uint8_t, 3> pixel(int x, int y) const {
    const auto i = (std::size_t(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
  void set_pixel(int x, int y, std::array<std::uint8_t, 3> c) {
    const auto i = (std::size_t(y) * width + x) * 3;
    rgb[i] = c[0];
    rgb[i + 1] = c[1];
    rgb[i + 2] = c[2];
  }
};

} // namespace evocad
