#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace evocad;
using evocad::test::box_mesh;
using evocad::test::box_triangles;
using evocad::test::unit_cube;

namespace {

std::string binary_stl(const std::vector<Triangle> &tris) {
  // Written by hand (not via write_stl) so the loader is checked independently.
  std::string out(80, ' ');
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
      out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  put32(static_cast<std::uint32_t>(tris.size()));
  for (const auto &t : tris) {
    for (int i = 0; i < 3; ++i)
      put32(std::bit_cast<std::uint32_t>(0.0f));
    for (const auto &p : t)
      for (double c : {p.x, p.y, p.z})
        put32(std::bit_cast<std::uint32_t>(static_cast<float>(c)));
    out += std::string(2, '\0');
  }
  return out;
}

TriMesh drop_face(const TriMesh &m, std::size_t f) {
  auto faces = m.faces();
  faces.erase(faces.begin() + static_cast<std::ptrdiff_t>(f));
  return TriMesh(m.vertices(), faces);
}

} // namespace

TEST(Stl, SingleFacetBinary) {
  const auto mesh = load_stl(binary_stl({{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}}}));
  EXPECT_EQ(mesh.vertices().size(), 3u);
  EXPECT_EQ(mesh.faces().size(), 1u);
}

TEST(Stl, CubeWithDuplicatedCornersWelds) {
  const auto mesh = load_stl(binary_stl(box_triangles({0, 0, 0}, {1, 1, 1})));
  EXPECT_EQ(mesh.vertices().size(), 8u);
  EXPECT_EQ(mesh.faces().size(), 12u);
}

TEST(Stl, HeaderStartingWithSolidIsStillBinary) {
  auto bytes = binary_stl(box_triangles({0, 0, 0}, {1, 1, 1}));
  bytes.replace(0, 6, "solid ");
  EXPECT_EQ(load_stl(bytes).faces().size(), 12u);
}

TEST(Stl, TruncatedBinaryIsMalformed) {
  std::string bytes(50, '\0');
  EXPECT_THROW(load_stl(bytes), MalformedStl);
  // Full header declaring 2 facets but only one present.
  auto two = binary_stl(box_triangles({0, 0, 0}, {1, 1, 1}));
  two.resize(84 + 50);
  two[80] = 2;
  two[81] = two[82] = two[83] = 0;
  try {
    load_stl(two);
    FAIL() << "expected MalformedStl";
  } catch (const MalformedStl &e) {
    EXPECT_EQ(e.offset(), 134u);
  }
}

TEST(Stl, AsciiGrammar) {
  const std::string text = R"(solid tri
  facet normal 0 0 1
    outer loop
      vertex 0 0 0
      vertex 1 0 0
      vertex 0 1 0
    endloop
  endfacet
endsolid tri
)";
  const auto mesh = load_stl(text);
  EXPECT_EQ(mesh.faces().size(), 1u);
  EXPECT_EQ(mesh.vertices()[1], (Vec3{1, 0, 0}));
}

TEST(Stl, AsciiNonNumericTokenReportsOffset) {
  const std::string text = "solid x\nfacet normal 0 0 1\nouter loop\nvertex 0 zero 0\n";
  try {
    load_stl(text);
    FAIL() << "expected MalformedStl";
  } catch (const MalformedStl &e) {
    EXPECT_EQ(e.offset(), text.find("zero"));
  }
}

TEST(Stl, RoundTripIsBitExact) {
  // Float-representable coordinates survive the 32-bit binary format exactly.
  const auto mesh = evocad::test::plate_mesh(2);
  const auto rounded = transformed(mesh, [](const Vec3 &p) {
    return Vec3{static_cast<float>(p.x), static_cast<float>(p.y), static_cast<float>(p.z)};
  });
  const auto back = load_stl(write_stl(rounded));
  ASSERT_EQ(back.faces().size(), rounded.faces().size());
  // Vertex numbering follows first appearance in both, so faces map 1:1.
  for (std::size_t f = 0; f < back.faces().size(); ++f)
    EXPECT_EQ(back.triangle(f), rounded.triangle(f));
}

TEST(Weld, CubeSoupMergesTo8Vertices) {
  const auto mesh = weld_vertices(box_triangles({0, 0, 0}, {1, 1, 1}));
  EXPECT_EQ(mesh.vertices().size(), 8u);
  EXPECT_EQ(mesh.faces().size(), 12u);
  EXPECT_EQ(mesh.dropped_faces(), 0u);
}

TEST(Weld, SharedEdgeHasTwoIncidentFaces) {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0}, d{1, 1, 0};
  const std::vector<Triangle> tris{{a, b, c}, {c, b, d}};
  const auto mesh = weld_vertices(tris);
  EXPECT_EQ(mesh.vertices().size(), 4u);
  EXPECT_EQ(mesh.faces().size(), 2u);
  const auto table = edge_table(mesh);
  EXPECT_EQ(std::count_if(table.begin(), table.end(), [](auto &e) { return e.faces == 2; }), 1);
}

TEST(Weld, CollapsedTriangleIsDropped) {
  const std::vector<Triangle> tris{{Vec3{0, 0, 0}, Vec3{1e-9, 0, 0}, Vec3{0, 2e-8, 0}}};
  const auto mesh = weld_vertices(tris);
  EXPECT_EQ(mesh.faces().size(), 0u);
  EXPECT_EQ(mesh.dropped_faces(), 1u);
}

TEST(Weld, Idempotent) {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto once = csg::compile(evocad::test::random_program(rng));
    EXPECT_EQ(weld(once), once);
  }
}

TEST(Euler, CubeIsTwo) {
  const auto cube = unit_cube();
  EXPECT_EQ(edge_table(cube).size(), 18u);
  EXPECT_EQ(euler_characteristic(cube), 2);
}

TEST(Euler, PlatesFollowGenus) {
  EXPECT_EQ(euler_characteristic(evocad::test::plate_mesh(1)), 0);
  EXPECT_EQ(euler_characteristic(evocad::test::plate_mesh(2)), -2);
  EXPECT_EQ(euler_characteristic(evocad::test::plate_mesh(3)), -4);
}

TEST(Euler, InvariantUnderFaceAndVertexPermutation) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prog = evocad::test::random_program(rng);
    const auto mesh = csg::compile(prog);
    std::vector<std::uint32_t> perm(mesh.vertices().size());
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::size_t i = perm.size(); i > 1; --i)
      std::swap(perm[i - 1], perm[rng.below(i)]);
    std::vector<Vec3> verts(mesh.vertices().size());
    for (std::size_t i = 0; i < perm.size(); ++i)
      verts[perm[i]] = mesh.vertices()[i];
    std::vector<Face> faces;
    for (auto f : mesh.faces())
      faces.push_back({perm[f[0]], perm[f[1]], perm[f[2]]});
    for (std::size_t i = faces.size(); i > 1; --i)
      std::swap(faces[i - 1], faces[rng.below(i)]);
    const TriMesh shuffled(std::move(verts), std::move(faces));
    EXPECT_EQ(euler_characteristic(shuffled), euler_characteristic(mesh));
    EXPECT_EQ(euler_characteristic(mesh), csg::expected_chi(prog));
  }
}

TEST(Watertight, CubeClosedOpenCubeNot) {
  const auto cube = unit_cube();
  EXPECT_TRUE(is_watertight(cube));
  EXPECT_FALSE(is_watertight(drop_face(cube, 0)));
}

TEST(Watertight, TwoDisjointClosedCubes) {
  auto tris = box_triangles({0, 0, 0}, {1, 1, 1});
  const auto more = box_triangles({3, 0, 0}, {4, 1, 1});
  tris.insert(tris.end(), more.begin(), more.end());
  const auto mesh = weld_vertices(tris);
  EXPECT_TRUE(is_watertight(mesh));
  EXPECT_EQ(euler_characteristic(mesh), 4);
}

TEST(Normalize, CubeCenteredToUnitExtent) {
  const auto n = normalize(box_mesh({0, 0, 0}, {2, 2, 2}));
  const auto box = bounds(n.mesh);
  EXPECT_EQ(box.min, (Vec3{-0.5, -0.5, -0.5}));
  EXPECT_EQ(box.max, (Vec3{0.5, 0.5, 0.5}));
  EXPECT_DOUBLE_EQ(n.applied.scale, 0.5);
}

TEST(Normalize, IdempotentWithinTolerance) {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) {
    const auto once = normalize(csg::compile(evocad::test::random_program(rng)));
    const auto twice = normalize(once.mesh);
    EXPECT_NEAR(twice.applied.scale, 1.0, 1e-12);
    EXPECT_NEAR(norm(twice.applied.rigid.translation), 0.0, 1e-12);
    for (std::size_t v = 0; v < once.mesh.vertices().size(); ++v)
      EXPECT_LE(distance(once.mesh.vertices()[v], twice.mesh.vertices()[v]), 1e-12);
  }
}

TEST(Normalize, DegenerateMeshRejected) {
  EXPECT_THROW(normalize(TriMesh()), DegenerateMesh);
  const TriMesh point({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, {{0, 1, 2}});
  EXPECT_THROW(normalize(point), DegenerateMesh);
}

TEST(Sampling, DeterministicForSeed) {
  const auto cube = unit_cube();
  EXPECT_EQ(sample_surface(cube, 500, 42).points, sample_surface(cube, 500, 42).points);
  EXPECT_NE(sample_surface(cube, 500, 42).points, sample_surface(cube, 500, 43).points);
}

TEST(Sampling, UnitSquareMeanNearCenter) {
  const std::vector<Triangle> square{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{1, 1, 0}},
                                     {Vec3{0, 0, 0}, Vec3{1, 1, 0}, Vec3{0, 1, 0}}};
  const auto cloud = sample_surface(weld_vertices(square), 100'000, 9);
  Vec3 mean;
  for (const auto &p : cloud.points)
    mean += p;
  mean *= 1.0 / cloud.size();
  EXPECT_NEAR(mean.x, 0.5, 0.01);
  EXPECT_NEAR(mean.y, 0.5, 0.01);
}

TEST(Sampling, SingleTrianglePointInside) {
  const std::vector<Triangle> tri{{Vec3{0, 0, 0}, Vec3{2, 0, 0}, Vec3{0, 2, 0}}};
  const auto p = sample_surface(weld_vertices(tri), 1, 5).points.at(0);
  EXPECT_GE(p.x, 0.0);
  EXPECT_GE(p.y, 0.0);
  EXPECT_LE(p.x + p.y, 2.0);
  EXPECT_EQ(p.z, 0.0);
}

TEST(Sampling, ZeroAreaRejected) {
  const TriMesh flat({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}});
  EXPECT_THROW(sample_surface(flat, 10, 1), DegenerateMesh);
}

TEST(Voxel, CubeOverOwnBoundsFullyOccupied) {
  const auto cube = unit_cube();
  const auto grid = voxelize(cube, bounds(cube), 8);
  EXPECT_EQ(grid.occupancy.size(), 512u);
  EXPECT_EQ(grid.count(), 512u);
}

TEST(Voxel, CubeInDoubleBoundsOccupiesAnEighth) {
  const auto cube = unit_cube();
  const Aabb box{{-0.5, -0.5, -0.5}, {1.5, 1.5, 1.5}};
  const auto grid = voxelize(cube, box, 16);
  const double fraction = static_cast<double>(grid.count()) / grid.occupancy.size();
  EXPECT_NEAR(fraction, 1.0 / 8.0, 0.02);
}

TEST(Voxel, OpenMeshRejected) {
  const auto open = drop_face(unit_cube(), 3);
  EXPECT_THROW(voxelize(open, bounds(open), 8), NotWatertight);
}

TEST(Voxel, GrazingRaysStillGiveExactCounts) {
  // Rays through cell centers of a 2x grid hit the face diagonals exactly.
  const auto cube = box_mesh({-1, -1, -1}, {1, 1, 1});
  const Aabb box{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
  const auto grid = voxelize(cube, box, 6);
  EXPECT_EQ(grid.count(), 64u);
}

TEST(Voxel, BoxFamilyVolumeConverges) {
  // Boxes with aspect ratio at most 2, voxelized over their own bounds: each
  // axis is off by at most half a cell.
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial)
    for (int res : {8, 16, 32, 64}) {
      const double w = 1.0 + rng.uniform(), h = 1.0 + rng.uniform(), t = 1.0 + rng.uniform();
      const auto prog = csg::parse("part z 0 " + std::to_string(t) + " { rect " +
                                   std::to_string(w) + " " + std::to_string(h) + " }");
      const auto mesh = csg::compile(prog);
      const auto grid = voxelize(mesh, bounds(mesh), res);
      const double analytic = signed_volume(mesh);
      EXPECT_LE(std::abs(grid.occupied_volume() - analytic) / analytic, 3.0 / res)
          << "w=" << w << " res=" << res;
    }
}
