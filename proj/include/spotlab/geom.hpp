#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "spotlab/rng.hpp"

namespace spotlab {

// A location in the unit square. Servers live in [0,1)^2; mobile users may
// touch the closed boundary after reflection.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Grid layouts measure distance on the torus (the grid wraps around);
// uniform layouts use the plain Euclidean metric.
enum class Metric { euclidean, torus };

inline double axis_delta(double a, double b, Metric metric) {
  double d = std::fabs(a - b);
  if (metric == Metric::torus) d = std::min(d, 1.0 - d);
  return d;
}

inline double distance_sq(Point a, Point b, Metric metric) {
  const double dx = axis_delta(a.x, b.x, metric);
  const double dy = axis_delta(a.y, b.y, metric);
  return dx * dx + dy * dy;
}

inline double distance(Point a, Point b, Metric metric) {
  return std::sqrt(distance_sq(a, b, metric));
}

struct GridPlacement {
  int side = 0;
};
struct UniformPlacement {
  std::uint64_t seed = 0;
};
using Placement = std::variant<GridPlacement, UniformPlacement>;

// Row-major server id for grid cell (gx, gy), both in [0, side).
inline std::uint32_t grid_id(int side, int gx, int gy) {
  return static_cast<std::uint32_t>(gx * side + gy);
}
inline std::pair<int, int> grid_coords(int side, std::uint32_t id) {
  return {static_cast<int>(id) / side, static_cast<int>(id) % side};
}

struct Neighbor {
  std::uint32_t id = 0;
  double dist = 0.0;
};

// An indexed, immutable set of server points. k_nearest is exact; the bucket
// index only accelerates the scan and never changes which servers are
// returned. Safe for concurrent reads after construction.
class ServerLayout {
 public:
  // side >= 2 cell-centered points on the torus, ((i+0.5)/side, (j+0.5)/side).
  static ServerLayout grid(int side) {
    if (side < 2) throw std::invalid_argument("ServerLayout::grid: side must be >= 2");
    ServerLayout out;
    out.metric_ = Metric::torus;
    out.placement_ = GridPlacement{side};
    out.pts_.reserve(static_cast<std::size_t>(side) * side);
    for (int gx = 0; gx < side; ++gx) {
      for (int gy = 0; gy < side; ++gy) {
        out.pts_.push_back({(gx + 0.5) / side, (gy + 0.5) / side});
      }
    }
    out.build_index();
    return out;
  }

  // n >= 2 i.i.d. uniform points; deterministic for a given seed.
  static ServerLayout uniform(int n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("ServerLayout::uniform: n must be >= 2");
    ServerLayout out;
    out.metric_ = Metric::euclidean;
    out.placement_ = UniformPlacement{seed};
    out.pts_.reserve(static_cast<std::size_t>(n));
    Rng rng = Rng::stream(seed, {tag::layout});
    for (int i = 0; i < n; ++i) {
      const double x = rng.uniform01();
      const double y = rng.uniform01();
      out.pts_.push_back({x, y});
    }
    out.build_index();
    return out;
  }

  // Arbitrary point set (test and tooling use); metric chosen by caller.
  static ServerLayout from_points(std::vector<Point> pts, Metric metric) {
    if (pts.size() < 2) throw std::invalid_argument("ServerLayout::from_points: need >= 2 points");
    ServerLayout out;
    out.metric_ = metric;
    out.placement_ = UniformPlacement{0};
    out.pts_ = std::move(pts);
    out.build_index();
    return out;
  }

  int size() const { return static_cast<int>(pts_.size()); }
  Metric metric() const { return metric_; }
  const std::vector<Point>& points() const { return pts_; }
  const Placement& placement() const { return placement_; }
  bool is_grid() const { return std::holds_alternative<GridPlacement>(placement_); }
  int grid_side() const { return std::get<GridPlacement>(placement_).side; }

  // The k servers nearest to p, ascending by (distance, id). Ties broken by
  // smaller server id. 1 <= k <= n.
  void k_nearest(Point p, int k, std::vector<Neighbor>& out) const {
    const int n = size();
    if (k < 1 || k > n) throw std::invalid_argument("k_nearest: k out of range");
    out.clear();

    if (k >= kBruteForceK || n <= kBruteForceN) {
      scan_all(p, k, out);
      return;
    }

    const int B = bucket_side_;
    const double cell = 1.0 / B;
    const int bx = bucket_of(p.x);
    const int by = bucket_of(p.y);
    const bool torus = metric_ == Metric::torus;
    // Rings wider than this revisit buckets through wraparound.
    const int max_ring = (B - 1) / (torus ? 2 : 1);

    for (int r = 0; r <= max_ring; ++r) {
      // Chebyshev ring r around (bx, by).
      for (int dx = -r; dx <= r; ++dx) {
        const bool edge_col = (dx == -r || dx == r);
        for (int dy = -r; dy <= r; ++dy) {
          if (!edge_col && dy != -r && dy != r) continue;
          int cx = bx + dx;
          int cy = by + dy;
          if (torus) {
            cx = ((cx % B) + B) % B;
            cy = ((cy % B) + B) % B;
          } else if (cx < 0 || cx >= B || cy < 0 || cy >= B) {
            continue;
          }
          scan_bucket(cx, cy, p, k, out);
        }
      }
      // Any bucket at ring >= r+1 holds points at distance >= r*cell.
      if (static_cast<int>(out.size()) == k && out.back().dist < r * cell) return;
    }
    scan_all(p, k, out);
  }

  std::vector<Neighbor> k_nearest(Point p, int k) const {
    std::vector<Neighbor> out;
    k_nearest(p, k, out);
    return out;
  }

  std::uint32_t nearest(Point p) const {
    std::vector<Neighbor> out;
    k_nearest(p, 1, out);
    return out[0].id;
  }

 private:
  static constexpr int kBruteForceK = 64;
  static constexpr int kBruteForceN = 32;

  int bucket_of(double v) const {
    int b = static_cast<int>(v * bucket_side_);
    if (b < 0) b = 0;
    if (b >= bucket_side_) b = bucket_side_ - 1;
    return b;
  }

  void build_index() {
    const int n = size();
    bucket_side_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    const int nb = bucket_side_ * bucket_side_;
    std::vector<std::uint32_t> count(nb + 1, 0);
    auto bucket_index = [&](Point q) {
      return bucket_of(q.x) * bucket_side_ + bucket_of(q.y);
    };
    for (const Point& q : pts_) ++count[bucket_index(q) + 1];
    for (int i = 0; i < nb; ++i) count[i + 1] += count[i];
    bucket_start_ = count;
    bucket_pts_.resize(pts_.size());
    std::vector<std::uint32_t> cursor(bucket_start_.begin(), bucket_start_.end() - 1);
    for (std::uint32_t i = 0; i < pts_.size(); ++i) {
      bucket_pts_[cursor[bucket_index(pts_[i])]++] = i;
    }
  }

  void consider(Point p, std::uint32_t id, int k, std::vector<Neighbor>& best) const {
    const double d = distance(p, pts_[id], metric_);
    if (static_cast<int>(best.size()) == k) {
      const Neighbor& worst = best.back();
      if (d > worst.dist || (d == worst.dist && id > worst.id)) return;
      best.pop_back();
    }
    Neighbor cand{id, d};
    auto pos = std::lower_bound(best.begin(), best.end(), cand, [](const Neighbor& a, const Neighbor& b) {
      return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
    });
    best.insert(pos, cand);
  }

  void scan_bucket(int cx, int cy, Point p, int k, std::vector<Neighbor>& best) const {
    const int bi = cx * bucket_side_ + cy;
    const std::uint32_t lo = bucket_start_[bi];
    const std::uint32_t hi = bucket_start_[bi + 1];
    for (std::uint32_t t = lo; t < hi; ++t) consider(p, bucket_pts_[t], k, best);
  }

  void scan_all(Point p, int k, std::vector<Neighbor>& best) const {
    best.clear();
    for (std::uint32_t id = 0; id < pts_.size(); ++id) consider(p, id, k, best);
  }

  std::vector<Point> pts_;
  Metric metric_ = Metric::euclidean;
  Placement placement_{UniformPlacement{0}};
  int bucket_side_ = 1;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> bucket_pts_;
};

inline ServerLayout make_grid_layout(int side) { return ServerLayout::grid(side); }
inline ServerLayout make_uniform_layout(int n, std::uint64_t seed) {
  return ServerLayout::uniform(n, seed);
}

}  // namespace spotlab
