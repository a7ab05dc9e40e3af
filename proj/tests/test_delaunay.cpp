#include "spotlab/delaunay.hpp"

#include <gtest/gtest.h>

#include <set>
#include <utility>
#include <vector>

#include "spotlab/geom.hpp"
#include "spotlab/predicates.hpp"
#include "test_util.hpp"

using namespace spotlab;

namespace {

// Independent Delaunay-graph oracle: (u, v) is an edge iff some point of the
// perpendicular bisector of uv is strictly closer to u and v than to every
// other point. Each "closer than w" constraint is linear along the bisector,
// so the feasible set is an interval; the edge exists iff it has positive
// length. O(n^3), test scale only.
std::set<std::pair<std::uint32_t, std::uint32_t>> bisector_oracle_edges(
    const std::vector<Point>& pts) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  const auto n = static_cast<std::uint32_t>(pts.size());
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      const double mx = 0.5 * (pts[u].x + pts[v].x);
      const double my = 0.5 * (pts[u].y + pts[v].y);
      const double dx = -(pts[v].y - pts[u].y);  // bisector direction
      const double dy = pts[v].x - pts[u].x;
      double lo = -1e308, hi = 1e308;
      bool feasible = true;
      for (std::uint32_t w = 0; w < n && feasible; ++w) {
        if (w == u || w == v) continue;
        // d^2(x, u) - d^2(x, w) < 0, linear in x = mid + t*(dx, dy).
        const double wa = pts[w].x - pts[u].x;
        const double wb = pts[w].y - pts[u].y;
        const double a0 = 2.0 * (mx * wa + my * wb) +
                          (pts[u].x * pts[u].x + pts[u].y * pts[u].y) -
                          (pts[w].x * pts[w].x + pts[w].y * pts[w].y);
        const double b0 = 2.0 * (dx * wa + dy * wb);
        if (b0 == 0.0) {
          feasible = a0 < 0.0;
        } else if (b0 > 0.0) {
          hi = std::min(hi, -a0 / b0);
        } else {
          lo = std::max(lo, -a0 / b0);
        }
      }
      if (feasible && lo < hi) edges.insert({u, v});
    }
  }
  return edges;
}

std::set<std::pair<std::uint32_t, std::uint32_t>> edge_set(const DelaunayGraph& g) {
  return {g.edges().begin(), g.edges().end()};
}

}  // namespace

TEST(Predicates, Orient2dSigns) {
  using predicates::orient2d;
  EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(orient2d({0, 0}, {0, 1}, {1, 0}), -1);
  EXPECT_EQ(orient2d({0, 0}, {0.5, 0.5}, {1, 1}), 0);
  // Near-collinear: 1e-17 perturbation is below double rounding on naive
  // evaluation but must still be resolved by the exact fallback.
  EXPECT_EQ(orient2d({0, 0}, {1e-30, 1e-30}, {1e30, 1e30}), 0);
}

TEST(Predicates, Orient2dExactFallbackAgrees) {
  Rng rng(3);
  for (int i = 0; i < 20000; ++i) {
    Point a{rng.uniform01(), rng.uniform01()};
    Point b{rng.uniform01(), rng.uniform01()};
    Point c{rng.uniform01(), rng.uniform01()};
    EXPECT_EQ(predicates::orient2d(a, b, c), predicates::orient2d_exact(a, b, c));
  }
}

TEST(Predicates, IncircleKnownCases) {
  using predicates::incircle;
  Point a{0, 0}, b{1, 0}, c{0, 1};
  EXPECT_EQ(incircle(a, b, c, {0.3, 0.3}), 1);    // well inside
  EXPECT_EQ(incircle(a, b, c, {2.0, 2.0}), -1);   // well outside
  EXPECT_EQ(incircle(a, b, c, {1.0, 1.0}), 0);  // exactly cocircular (unit square)
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {1, 1}, {0, 1}), 0);
}

TEST(Predicates, IncircleExactFallbackAgrees) {
  Rng rng(4);
  for (int i = 0; i < 20000; ++i) {
    Point a{rng.uniform01(), rng.uniform01()};
    Point b{rng.uniform01(), rng.uniform01()};
    Point c{rng.uniform01(), rng.uniform01()};
    Point d{rng.uniform01(), rng.uniform01()};
    if (predicates::orient2d(a, b, c) <= 0) std::swap(b, c);
    EXPECT_EQ(predicates::incircle(a, b, c, d), predicates::incircle_exact(a, b, c, d));
  }
}

TEST(Predicates, IncircleNearDegeneratePerturbations) {
  // Points on the unit circle nudged by one ulp must resolve consistently.
  Point a{0, 0}, b{1, 0}, c{0, 1};
  const double up = std::nextafter(1.0, 2.0);
  const double down = std::nextafter(1.0, 0.0);
  EXPECT_EQ(predicates::incircle(a, b, c, {up, 1.0}), -1);
  EXPECT_EQ(predicates::incircle(a, b, c, {down, 1.0}), 1);
}

TEST(GridDelaunay, FourRegularWithTwiceNEdges) {
  for (int side : {3, 8, 16}) {
    auto g = build_grid_delaunay(side);
    const int n = side * side;
    EXPECT_EQ(g.vertex_count(), n);
    EXPECT_EQ(g.edge_count(), static_cast<std::size_t>(2 * n));
    for (int v = 0; v < n; ++v) EXPECT_EQ(g.degree(static_cast<std::uint32_t>(v)), 4);
    EXPECT_TRUE(g.connected());
  }
}

TEST(GridDelaunay, SideTwoRejected) {
  EXPECT_THROW(build_grid_delaunay(2), std::invalid_argument);
}

TEST(GridDelaunay, NeighborsAreRookNeighbors) {
  const int side = 5;
  auto g = build_grid_delaunay(side);
  for (int gx = 0; gx < side; ++gx) {
    for (int gy = 0; gy < side; ++gy) {
      const auto id = grid_id(side, gx, gy);
      EXPECT_TRUE(g.has_edge(id, grid_id(side, (gx + 1) % side, gy)));
      EXPECT_TRUE(g.has_edge(id, grid_id(side, (gx + side - 1) % side, gy)));
      EXPECT_TRUE(g.has_edge(id, grid_id(side, gx, (gy + 1) % side)));
      EXPECT_TRUE(g.has_edge(id, grid_id(side, gx, (gy + side - 1) % side)));
      EXPECT_FALSE(g.has_edge(id, grid_id(side, (gx + 1) % side, (gy + 1) % side)));
    }
  }
}

TEST(BuildDelaunay, TriangleOfThreePoints) {
  auto layout = ServerLayout::from_points({{0.2, 0.2}, {0.8, 0.3}, {0.4, 0.9}}, Metric::euclidean);
  auto g = build_delaunay(layout);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(BuildDelaunay, CollinearPointsRejected) {
  auto layout =
      ServerLayout::from_points({{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}, {0.7, 0.7}}, Metric::euclidean);
  EXPECT_THROW(build_delaunay(layout), degenerate_input_error);
}

TEST(BuildDelaunay, TorusPointSetRejected) {
  auto layout = ServerLayout::from_points({{0.1, 0.1}, {0.5, 0.2}, {0.4, 0.8}}, Metric::torus);
  EXPECT_THROW(build_delaunay(layout), std::invalid_argument);
}

TEST(BuildDelaunay, DuplicatePointsRejected) {
  auto layout =
      ServerLayout::from_points({{0.1, 0.1}, {0.5, 0.2}, {0.1, 0.1}, {0.4, 0.8}}, Metric::euclidean);
  EXPECT_THROW(build_delaunay(layout), degenerate_input_error);
}

TEST(BuildDelaunay, PlanarEdgeBounds) {
  auto layout = make_uniform_layout(64, 5);
  auto g = build_delaunay(layout);
  EXPECT_GE(g.edge_count(), 63u);
  EXPECT_LE(g.edge_count(), 186u);  // 3n - 6
  EXPECT_TRUE(g.connected());
}

TEST(BuildDelaunay, GridLayoutDelegatesToRookAdjacency) {
  auto layout = make_grid_layout(8);
  auto g = build_delaunay(layout);
  EXPECT_EQ(g.edge_count(), 128u);
  for (int v = 0; v < 64; ++v) EXPECT_EQ(g.degree(static_cast<std::uint32_t>(v)), 4);
}

TEST(BuildDelaunay, MatchesBisectorOracle) {
  for (std::uint64_t seed : {1, 2, 3, 11, 12}) {
    for (int n : {8, 25, 60}) {
      auto layout = make_uniform_layout(n, seed);
      auto got = edge_set(build_delaunay(layout));
      auto want = bisector_oracle_edges(layout.points());
      EXPECT_EQ(got, want) << "n=" << n << " seed=" << seed;
    }
  }
}

TEST(BuildDelaunay, CocircularSquareGetsOneDiagonal) {
  // Four cocircular points: the tie rule must produce a valid triangulation
  // with the four hull edges plus exactly one diagonal, deterministically.
  std::vector<Point> square{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}};
  auto layout = ServerLayout::from_points(square, Metric::euclidean);
  auto g1 = build_delaunay(layout);
  auto g2 = build_delaunay(layout);
  EXPECT_EQ(edge_set(g1), edge_set(g2));
  EXPECT_EQ(g1.edge_count(), 5u);
  EXPECT_TRUE(g1.has_edge(0, 1));
  EXPECT_TRUE(g1.has_edge(1, 2));
  EXPECT_TRUE(g1.has_edge(2, 3));
  EXPECT_TRUE(g1.has_edge(0, 3));
}

TEST(BuildDelaunay, TwoNearestOfAnyProbeFormAnEdge) {
  auto layout = make_uniform_layout(200, 9);
  auto g = build_delaunay(layout);
  Rng rng = Rng::stream(99, {tag::probe});
  for (int i = 0; i < 100000; ++i) {
    Point p{rng.uniform01(), rng.uniform01()};
    const auto [a, b] = testutil::brute_force_two_nearest(layout, p);
    ASSERT_TRUE(g.has_edge(a, b)) << "probe " << i;
  }
}

TEST(BuildDelaunay, InsertionOrderInvariance) {
  // Same point set presented in scrambled order must give the same graph.
  auto base = make_uniform_layout(40, 17);
  std::vector<Point> shuffled = base.points();
  Rng rng(5);
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
  }
  auto a = build_delaunay(base);
  auto b = build_delaunay(ServerLayout::from_points(shuffled, Metric::euclidean));
  // Map edges of b back through the permutation.
  std::vector<std::uint32_t> back(shuffled.size());
  for (std::uint32_t i = 0; i < shuffled.size(); ++i) {
    for (std::uint32_t j = 0; j < base.points().size(); ++j) {
      if (shuffled[i].x == base.points()[j].x && shuffled[i].y == base.points()[j].y) back[i] = j;
    }
  }
  std::set<std::pair<std::uint32_t, std::uint32_t>> remapped;
  for (auto [u, v] : b.edges()) {
    auto x = back[u], y = back[v];
    remapped.insert({std::min(x, y), std::max(x, y)});
  }
  EXPECT_EQ(edge_set(a), remapped);
}

TEST(EdgeList, WritesOnePairPerLine) {
  auto g = build_grid_delaunay(3);
  std::ostringstream os;
  write_edge_list(os, g);
  std::istringstream is(os.str());
  std::string line;
  std::size_t lines = 0;
  while (std::getline(is, line)) ++lines;
  EXPECT_EQ(lines, g.edge_count());
}
