#include "support.hpp"

#include "evocad/render.hpp"

#include <gtest/gtest.h>

using namespace evocad;

namespace {
double quadrant_coverage(const Image &img, int q) {
  const int cell = img.width / 2, x0 = (q % 2) * cell, y0 = (q / 2) * cell;
  int filled = 0;
  for (int y = y0; y < y0 + cell; ++y)
    for (int x = x0; x < x0 + cell; ++x)
      filled += img.pixel(x, y) != kBackground;
  return static_cast<double>(filled) / (cell * cell);
}
} // namespace

TEST(Render, CubeCoversEveryQuadrant) {
  const auto img = render_multiview(evocad::test::unit_cube(), 256);
  ASSERT_EQ(img.rgb.size(), 256u * 256u * 3u);
  for (int q = 0; q < 4; ++q)
    EXPECT_GT(quadrant_coverage(img, q), 0.05) << "quadrant " << q;
}

TEST(Render, Deterministic) {
  const auto plate = evocad::test::plate_mesh(3);
  EXPECT_EQ(render_multiview(plate, 128).rgb, render_multiview(plate, 128).rgb);
}

TEST(Render, TranslationDoesNotChangePixels) {
  const auto plate = evocad::test::plate_mesh(2);
  const auto moved = transformed(plate, [](const Vec3 &p) { return p + Vec3{8, -4, 0.5}; });
  EXPECT_EQ(render_multiview(plate, 128).rgb, render_multiview(moved, 128).rgb);
}

TEST(Render, HiddenInnerCubeInvisible) {
  auto outer = evocad::test::box_triangles({0, 0, 0}, {1, 1, 1});
  const auto alone = render_multiview(weld_vertices(outer), 128);
  const auto inner = evocad::test::box_triangles({0.3, 0.3, 0.3}, {0.6, 0.6, 0.6});
  outer.insert(outer.end(), inner.begin(), inner.end());
  EXPECT_EQ(render_multiview(weld_vertices(outer), 128).rgb, alone.rgb);
}

TEST(Render, HolesAreVisibleInTopView) {
  // The top view of a plate with holes shows background through them.
  const auto solid = render_multiview(evocad::test::plate_mesh(0), 256);
  const auto holed = render_multiview(evocad::test::plate_mesh(3), 256);
  EXPECT_GT(quadrant_coverage(solid, 2), quadrant_coverage(holed, 2));
}

TEST(Render, RejectsBadInput) {
  EXPECT_THROW(render_multiview(evocad::test::unit_cube(), 32), ConstraintError);
  EXPECT_THROW(render_multiview(TriMesh(), 128), DegenerateMesh);
}

TEST(Png, SingleRedPixel) {
  const auto dir = evocad::test::fresh_temp_dir("png");
  const Image red(1, 1, {255, 0, 0});
  write_png(red, dir / "red.png");
  const auto back = read_png(dir / "red.png");
  EXPECT_EQ(back.width, 1);
  EXPECT_EQ(back.height, 1);
  EXPECT_EQ(back.pixel(0, 0), (std::array<std::uint8_t, 3>{255, 0, 0}));
}

TEST(Png, RoundTripPreservesBytes) {
  const auto img = render_multiview(evocad::test::plate_mesh(1), 96);
  const auto bytes = encode_png(img);
  ASSERT_GT(bytes.size(), 8u);
  EXPECT_EQ(bytes[1], 'P');
  EXPECT_EQ(decode_png(bytes).rgb, img.rgb);
}

TEST(Png, UnwritableDirectory) {
  EXPECT_THROW(write_png(Image(2, 2), "/nonexistent_dir/x/y.png"), IoError);
}
