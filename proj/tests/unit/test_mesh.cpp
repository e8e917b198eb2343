#include <gtest/gtest.h>

#include <limits>
#include <set>

#include "ocp/mesh.hpp"

using namespace ocp;

namespace {

const Rectangle kUnit{0.0, 1.0, 0.0, 1.0};
const Rectangle kSquare{-1.0, 1.0, -1.0, 1.0};

double signed_area(const Mesh& m, Index e) {
  const auto& t = m.elements()[e];
  const Point a = m.nodes()[t[0]], b = m.nodes()[t[1]], c = m.nodes()[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

}  // namespace

TEST(Mesh, SmallestMesh) {
  const Mesh m = build_rect_mesh(1, 1, kUnit);
  EXPECT_EQ(m.num_nodes(), 4);
  EXPECT_EQ(m.num_elements(), 2);
  EXPECT_EQ(m.boundary_nodes().size(), 4u);
}

TEST(Mesh, Level5MeshOnSquare) {
  EXPECT_EQ(build_rect_mesh(32, 32, kSquare).num_nodes(), 1089);
}

TEST(Mesh, TwoByTwoHasOneInteriorNode) {
  const Mesh m = build_rect_mesh(2, 2, kUnit);
  EXPECT_EQ(m.num_nodes(), 9);
  EXPECT_EQ(m.boundary_nodes().size(), 8u);
  EXPECT_FALSE(m.is_boundary(4));
  EXPECT_DOUBLE_EQ(m.nodes()[4].x, 0.5);
  EXPECT_DOUBLE_EQ(m.nodes()[4].y, 0.5);
}

TEST(Mesh, CountsAndBoundary) {
  for (auto [nx, ny] : {std::pair<Index, Index>{3, 5}, {7, 2}, {16, 16}}) {
    const Mesh m = build_rect_mesh(nx, ny, {0.0, 3.0, -2.0, 1.0});
    EXPECT_EQ(m.num_nodes(), (nx + 1) * (ny + 1));
    EXPECT_EQ(m.num_elements(), 2 * nx * ny);
    EXPECT_EQ(static_cast<Index>(m.boundary_nodes().size()), 2 * (nx + ny));
    for (Index i = 0; i < m.num_nodes(); ++i) {
      const Point p = m.nodes()[i];
      const bool on = p.x == 0.0 || p.x == 3.0 || p.y == -2.0 || p.y == 1.0;
      EXPECT_EQ(on, m.is_boundary(i)) << "node " << i;
    }
    EXPECT_TRUE(std::is_sorted(m.boundary_nodes().begin(), m.boundary_nodes().end()));
  }
}

TEST(Mesh, AreasPositiveAndSumToDomain) {
  const Mesh m = build_rect_mesh(13, 9, {-1.0, 2.5, 0.0, 0.7});
  double total = 0.0;
  for (Index e = 0; e < m.num_elements(); ++e) {
    EXPECT_GT(signed_area(m, e), 0.0);
    EXPECT_NEAR(signed_area(m, e), m.element_area(e), 1e-15);
    total += signed_area(m, e);
  }
  EXPECT_NEAR(total / m.domain().area(), 1.0, 1e-13);
}

TEST(Mesh, DiagonalRunsLowerLeftToUpperRight) {
  const Mesh m = build_rect_mesh(1, 1, kUnit);
  for (const auto& t : m.elements()) {
    const std::set<Index> s(t.begin(), t.end());
    EXPECT_TRUE(s.count(0) && s.count(3));
  }
}

TEST(Mesh, RowMajorNumbering) {
  const Mesh m = build_rect_mesh(4, 3, kUnit);
  EXPECT_EQ(m.node_index(2, 1), 7);
  EXPECT_DOUBLE_EQ(m.nodes()[7].x, 0.5);
  EXPECT_NEAR(m.nodes()[7].y, 1.0 / 3.0, 1e-16);
}

TEST(Mesh, InvalidInputs) {
  EXPECT_THROW(build_rect_mesh(0, 1, kUnit), DimensionError);
  EXPECT_THROW(build_rect_mesh(1, -2, kUnit), DimensionError);
  EXPECT_THROW(build_rect_mesh(1, 1, {1.0, 1.0, 0.0, 1.0}), DimensionError);
  EXPECT_THROW(build_rect_mesh(1, 1, {0.0, 1.0, 2.0, 1.0}), DimensionError);
}

TEST(Mesh, RefineDoubles) {
  const Mesh m1 = build_rect_mesh(1, 1, kUnit);
  const Mesh m2 = refine(m1);
  EXPECT_EQ(m2.nx(), 2);
  EXPECT_EQ(m2.num_nodes(), 9);
  EXPECT_EQ(m2.level(), m1.level() + 1);
  const Mesh m4 = refine(m2);
  EXPECT_EQ(m4.num_nodes(), 25);
  EXPECT_EQ(m4.domain(), kUnit);
}

TEST(Mesh, RefinementIsNestedBitExactly) {
  const Mesh coarse = build_rect_mesh(3, 5, {-1.0, 1.0, -0.3, 0.7});
  const Mesh fine = refine(coarse);
  for (Index j = 0; j <= coarse.ny(); ++j) {
    for (Index i = 0; i <= coarse.nx(); ++i) {
      const Point c = coarse.nodes()[coarse.node_index(i, j)];
      const Point f = fine.nodes()[fine.node_index(2 * i, 2 * j)];
      EXPECT_EQ(c.x, f.x);
      EXPECT_EQ(c.y, f.y);
    }
  }
}

TEST(Mesh, RefinementParentsAverageToChild) {
  const Mesh coarse = build_rect_mesh(4, 4, kSquare);
  const Mesh fine = refine(coarse);
  ASSERT_EQ(static_cast<Index>(fine.parents().size()), fine.num_nodes());
  for (Index i = 0; i < fine.num_nodes(); ++i) {
    const auto [a, b] = fine.parents()[i];
    const Point pa = coarse.nodes()[a], pb = coarse.nodes()[b];
    EXPECT_NEAR(0.5 * (pa.x + pb.x), fine.nodes()[i].x, 1e-15);
    EXPECT_NEAR(0.5 * (pa.y + pb.y), fine.nodes()[i].y, 1e-15);
  }
}

TEST(Mesh, ProlongationPreservesConstants) {
  const Mesh coarse = build_rect_mesh(4, 4, kSquare);
  const Mesh fine = refine(coarse);
  const SparseMatrix p = prolongation(fine, coarse.num_nodes());
  const Vector ones(coarse.num_nodes(), 1.0);
  for (double v : spmv(p, ones)) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Mesh, ProlongationInterpolatesLinearFunctions) {
  const Mesh coarse = build_rect_mesh(4, 2, kSquare);
  const Mesh fine = refine(coarse);
  Vector lin(coarse.num_nodes());
  for (Index i = 0; i < coarse.num_nodes(); ++i) lin[i] = 2.0 * coarse.nodes()[i].x - coarse.nodes()[i].y;
  const Vector out = spmv(prolongation(fine, coarse.num_nodes()), lin);
  for (Index i = 0; i < fine.num_nodes(); ++i) {
    EXPECT_NEAR(out[i], 2.0 * fine.nodes()[i].x - fine.nodes()[i].y, 1e-14);
  }
}

TEST(Mesh, Hierarchy) {
  const auto h = build_mesh_hierarchy(4, kSquare);
  ASSERT_EQ(h.size(), 4u);
  EXPECT_EQ(h.front().nx(), 2);
  EXPECT_EQ(h.back().nx(), 16);
  EXPECT_EQ(h.back().num_nodes(), 289);
}

TEST(Mesh, RefineOverflowIsReported) {
  const Index big = std::numeric_limits<Index>::max() / 4;
  EXPECT_THROW(build_rect_mesh(big, big, kUnit), DimensionError);
}
