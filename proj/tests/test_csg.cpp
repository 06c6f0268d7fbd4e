#include "support.hpp"

#include <gtest/gtest.h>

using namespace evocad;
using namespace evocad::csg;

TEST(CsgParse, PlateWithTwoHoles) {
  const auto prog = parse("part z 0 0.2 { rect 4 3; hole rect 0.5 0.5 at -1 0; hole rect 0.5 0.5 at 1 0 }");
  ASSERT_EQ(prog.parts.size(), 1u);
  EXPECT_EQ(prog.parts[0].holes.size(), 2u);
  EXPECT_EQ(prog.parts[0].holes[0].at, (Vec2{-1, 0}));
}

TEST(CsgParse, Cuboid) {
  const auto prog = parse("part z 0 1 { rect 1 1 }");
  ASSERT_EQ(prog.parts.size(), 1u);
  EXPECT_EQ(prog.parts[0].outer, Shape::rect(1, 1));
  EXPECT_TRUE(prog.parts[0].holes.empty());
}

TEST(CsgParse, CommentsPolyAndCircles) {
  const auto prog = parse(R"(# bracket
part z 0 0.5 {
  poly 0 0  4 0  4 2  0 2;   # outline
  hole circ 0.4 at 1 1;
  hole poly (-0.2 -0.2) (0.2 -0.2) (0 0.2) at 3 1;
}
part z 1 2 { circ 1; }
)");
  ASSERT_EQ(prog.parts.size(), 2u);
  EXPECT_EQ(prog.parts[0].outer.points.size(), 4u);
  EXPECT_EQ(prog.parts[0].holes[1].shape.points.size(), 3u);
  EXPECT_EQ(prog.parts[1].outer.kind, Shape::Kind::Circ);
}

TEST(CsgParse, HoleOutsideOuterIsConstraintError) {
  EXPECT_THROW(parse("part z 0 1 { rect 2 2; hole rect 0.5 0.5 at 5 0 }"), ConstraintError);
}

TEST(CsgParse, OtherConstraintViolations) {
  EXPECT_THROW(parse("part z 1 0 { rect 2 2 }"), ConstraintError);
  EXPECT_THROW(parse("part z 0 1 { rect 2 2; hole circ 0.5 at 0 0; hole circ 0.5 at 0.5 0 }"),
               ConstraintError);
  EXPECT_THROW(parse("part z 0 1 { rect 2 2; hole rect 1 1 at 0.5 0 }"), ConstraintError); // touches edge
  EXPECT_THROW(parse("part z 0 1 { rect 2 2 } part z 0.5 2 { rect 1 1 }"), ConstraintError);
  EXPECT_THROW(parse("part z 0 1 { rect 2 2 } part z 1 2 { rect 2 2 }"), ConstraintError); // touching
  EXPECT_THROW(parse("part z 0 1 { poly 0 0 2 2 2 0 0 2 }"), ConstraintError);             // bow tie
  // Side by side at the same height is fine when footprints are apart.
  EXPECT_NO_THROW(parse("part z 0 1 { rect 2 2 } part z 0 1 { poly 5 0 7 0 7 2 }"));
}

TEST(CsgParse, SyntaxErrorsCarryPosition) {
  try {
    parse("part z 0 1 {\n  rect 1 x\n}");
    FAIL();
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 10);
  }
  EXPECT_THROW(parse(""), SyntaxError);
  EXPECT_THROW(parse("part z 0 1 { rect 1 1"), SyntaxError);
  EXPECT_THROW(parse("part z 0 1 { hexagon 1 }"), SyntaxError);
  EXPECT_THROW(parse("part z 0 1 { rect 2 2; hole rect 1 1 }"), SyntaxError);
}

TEST(CsgPrint, RoundTripOnRandomPrograms) {
  Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const auto prog = evocad::test::random_program(rng);
    EXPECT_EQ(parse(print(prog)), prog);
  }
}

TEST(CsgCompile, CuboidIsClosedGenusZero) {
  const auto mesh = compile(parse("part z 0 1 { rect 1 1 }"));
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_EQ(euler_characteristic(mesh), 2);
  EXPECT_NEAR(signed_volume(mesh), 1.0, 1e-12);
}

TEST(CsgCompile, TwoHolePlate) {
  const auto mesh = evocad::test::plate_mesh(2);
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_EQ(euler_characteristic(mesh), -2);
  EXPECT_NEAR(signed_volume(mesh), (12.0 - 2 * 0.16) * 0.2, 1e-9);
}

TEST(CsgCompile, StackedCuboidsAreTwoComponents) {
  const auto mesh = compile(parse("part z 0 1 { rect 1 1 } part z 2 3 { rect 1 1 }"));
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_EQ(euler_characteristic(mesh), 4);
}

TEST(CsgCompile, CircularHolesCapAreaMatchesPolygon) {
  const auto prog = parse("part z 0 1 { circ 3; hole circ 1 at 0 0.5; hole rect 0.5 0.5 at 0 -2 }");
  const auto mesh = compile(prog);
  const auto prof = profile_of(prog.parts[0]);
  double area = signed_area(prof.outer);
  for (const auto &h : prof.holes)
    area += signed_area(h); // holes are clockwise
  EXPECT_NEAR(signed_volume(mesh), area, 1e-9);
  EXPECT_EQ(euler_characteristic(mesh), -2);
}

TEST(CsgCompile, RandomProgramsMatchExpectedChiAndAreClosed) {
  Rng rng(2024);
  for (int i = 0; i < 200; ++i) {
    const auto prog = evocad::test::random_program(rng);
    const auto mesh = compile(prog);
    ASSERT_TRUE(is_watertight(mesh)) << print(prog);
    ASSERT_EQ(euler_characteristic(mesh), expected_chi(prog)) << print(prog);
    EXPECT_GT(signed_volume(mesh), 0.0);
  }
}

TEST(CsgExpectedChi, Examples) {
  EXPECT_EQ(expected_chi(parse("part z 0 1 { rect 1 1 }")), 2);
  EXPECT_EQ(expected_chi(parse(evocad::test::plate_source(3))), -4);
  EXPECT_EQ(expected_chi(parse("part z 0 1 { rect 2 2; hole circ 0.3 at 0 0 } "
                               "part z 2 3 { rect 2 2; hole circ 0.3 at 0 0 }")),
            0);
}
