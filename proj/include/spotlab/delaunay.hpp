#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "spotlab/geom.hpp"
#include "spotlab/predicates.hpp"

namespace spotlab {

struct degenerate_input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adjacency structure over servers: an edge connects two servers whose
// Voronoi cells share a boundary segment.
class DelaunayGraph {
 public:
  DelaunayGraph(int n, std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_list)
      : n_(n), edges_(std::move(edge_list)), adjacency_(static_cast<std::size_t>(n)) {
    for (auto& [u, v] : edges_) {
      if (u == v) throw std::invalid_argument("DelaunayGraph: self-loop");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw std::invalid_argument("DelaunayGraph: duplicate edge");
    }
    for (const auto& [u, v] : edges_) {
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
  }

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  const std::vector<std::uint32_t>& neighbors(std::uint32_t v) const { return adjacency_[v]; }
  int degree(std::uint32_t v) const { return static_cast<int>(adjacency_[v].size()); }

  bool has_edge(std::uint32_t u, std::uint32_t v) const {
    if (u == v || u >= adjacency_.size() || v >= adjacency_.size()) return false;
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  bool connected() const {
    if (n_ == 0) return true;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto w : adjacency_[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          ++visited;
          stack.push_back(w);
        }
      }
    }
    return visited == static_cast<std::size_t>(n_);
  }

 private:
  int n_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

// Rook adjacency on the wraparound grid: server (i,j) is adjacent to
// (i±1,j) and (i,j±1) mod side. This is constructed combinatorially, not by
// triangulating the points: grid points are 4-cocircular, and the structure
// the allocation analysis needs is exactly the 4-regular wrap grid.
inline DelaunayGraph build_grid_delaunay(int side) {
  if (side < 3) throw std::invalid_argument("build_grid_delaunay: side must be >= 3");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(static_cast<std::size_t>(2) * side * side);
  for (int gx = 0; gx < side; ++gx) {
    for (int gy = 0; gy < side; ++gy) {
      const std::uint32_t id = grid_id(side, gx, gy);
      edges.emplace_back(id, grid_id(side, (gx + 1) % side, gy));
      edges.emplace_back(id, grid_id(side, gx, (gy + 1) % side));
    }
  }
  return DelaunayGraph(side * side, std::move(edges));
}

namespace detail {

inline constexpr std::uint32_t kGhost = 0xffffffffu;

struct Tri {
  std::uint32_t a, b, c;
  bool alive = true;
  bool ghost() const { return a == kGhost || b == kGhost || c == kGhost; }
  // For a ghost triangle, the finite directed edge (u -> v) in cyclic order.
  std::pair<std::uint32_t, std::uint32_t> ghost_edge() const {
    if (c == kGhost) return {a, b};
    if (a == kGhost) return {b, c};
    return {c, a};
  }
};

inline bool strictly_between_on_line(Point u, Point v, Point p) {
  // Precondition: u, v, p exactly collinear, u != v.
  if (u.x != v.x) return (u.x < p.x && p.x < v.x) || (v.x < p.x && p.x < u.x);
  return (u.y < p.y && p.y < v.y) || (v.y < p.y && p.y < u.y);
}

// Conflict ("p lies in the open circumdisk") test for solid and ghost
// triangles. On-circle ties count as no conflict, so cocircular quadruples
// are resolved deterministically by insertion order.
inline bool in_conflict(const Tri& t, const std::vector<Point>& pts, Point p) {
  if (!t.ghost()) {
    return predicates::incircle(pts[t.a], pts[t.b], pts[t.c], p) > 0;
  }
  const auto [u, v] = t.ghost_edge();
  const int o = predicates::orient2d(pts[u], pts[v], p);
  if (o > 0) return true;
  if (o < 0) return false;
  return strictly_between_on_line(pts[u], pts[v], p);
}

}  // namespace detail

// Delaunay graph of an arbitrary point set via incremental Bowyer-Watson
// insertion with a ghost vertex standing in for the exterior. Predicates are
// exact, so the structure is deterministic for any input; all-collinear or
// duplicated points are rejected. Quadratic construction cost, meant for the
// estimator-scale point sets used here (hundreds to a few thousand points).
inline DelaunayGraph build_delaunay(const ServerLayout& layout) {
  using detail::kGhost;
  using detail::Tri;

  if (layout.is_grid()) return build_grid_delaunay(layout.grid_side());
  if (layout.metric() == Metric::torus) {
    throw std::invalid_argument("build_delaunay: torus adjacency exists only for grid layouts");
  }

  const int n = layout.size();
  if (n < 3) throw std::invalid_argument("build_delaunay: need at least 3 points");
  const std::vector<Point>& original = layout.points();

  // Insertion order: lexicographic. Keeps construction order-independent of
  // the caller's point ordering and makes the cocircular tie rule stable.
  std::vector<std::uint32_t> order(original.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
    const Point& p = original[i];
    const Point& q = original[j];
    if (p.x != q.x) return p.x < q.x;
    if (p.y != q.y) return p.y < q.y;
    return i < j;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Point& p = original[order[i - 1]];
    const Point& q = original[order[i]];
    if (p.x == q.x && p.y == q.y) throw degenerate_input_error("build_delaunay: duplicate points");
  }

  std::vector<Point> pts;
  pts.reserve(original.size());
  for (auto id : order) pts.push_back(original[id]);

  // Bootstrap triangle: points 0, 1, and the first point not collinear with
  // them. The skipped collinear points are inserted in the main loop.
  std::uint32_t third = 0;
  int orient = 0;
  for (std::uint32_t j = 2; j < pts.size(); ++j) {
    orient = predicates::orient2d(pts[0], pts[1], pts[j]);
    if (orient != 0) {
      third = j;
      break;
    }
  }
  if (orient == 0) throw degenerate_input_error("build_delaunay: all points collinear");

  std::vector<Tri> tris;
  {
    std::uint32_t a = 0, b = 1, c = third;
    if (orient < 0) std::swap(b, c);
    tris.push_back({a, b, c});
    tris.push_back({b, a, kGhost});
    tris.push_back({c, b, kGhost});
    tris.push_back({a, c, kGhost});
  }

  std::vector<std::uint32_t> cavity;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> cavity_edges;
  for (std::uint32_t pi = 2; pi < pts.size(); ++pi) {
    if (pi == third) continue;
    const Point p = pts[pi];

    cavity.clear();
    for (std::uint32_t t = 0; t < tris.size(); ++t) {
      if (tris[t].alive && detail::in_conflict(tris[t], pts, p)) cavity.push_back(t);
    }
    if (cavity.empty()) throw degenerate_input_error("build_delaunay: duplicate points");

    // Boundary = directed edges of cavity triangles whose reverse lies
    // outside the cavity.
    cavity_edges.clear();
    for (auto t : cavity) {
      const Tri& tr = tris[t];
      cavity_edges.emplace_back(tr.a, tr.b);
      cavity_edges.emplace_back(tr.b, tr.c);
      cavity_edges.emplace_back(tr.c, tr.a);
      tris[t].alive = false;
    }
    std::sort(cavity_edges.begin(), cavity_edges.end());
    for (const auto& [x, y] : cavity_edges) {
      if (std::binary_search(cavity_edges.begin(), cavity_edges.end(), std::make_pair(y, x))) {
        continue;  // interior to the cavity
      }
      tris.push_back({x, y, pi});
    }
  }

  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (const Tri& t : tris) {
    if (!t.alive || t.ghost()) continue;
    const std::uint32_t v0 = order[t.a], v1 = order[t.b], v2 = order[t.c];
    edges.emplace_back(std::min(v0, v1), std::max(v0, v1));
    edges.emplace_back(std::min(v1, v2), std::max(v1, v2));
    edges.emplace_back(std::min(v0, v2), std::max(v0, v2));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return DelaunayGraph(n, std::move(edges));
}

// One `u v` line per edge.
inline void write_edge_list(std::ostream& os, const DelaunayGraph& graph) {
  for (const auto& [u, v] : graph.edges()) os << u << ' ' << v << '\n';
}

}  // namespace spotlab
