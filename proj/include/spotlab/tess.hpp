#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "spotlab/delaunay.hpp"
#include "spotlab/geom.hpp"
#include "spotlab/rng.hpp"

namespace spotlab {

using ServerPair = std::pair<std::uint32_t, std::uint32_t>;

inline ServerPair make_pair_key(std::uint32_t a, std::uint32_t b) {
  return a < b ? ServerPair{a, b} : ServerPair{b, a};
}

// Empirical distribution of the unordered two-nearest server pair of a
// uniform random user. On the wraparound grid this is uniform over the
// Delaunay edges; under uniform placement the masses are all different.
struct EdgeProbabilityEstimate {
  std::uint64_t samples = 0;
  std::map<ServerPair, std::uint64_t> pair_counts;
  std::uint64_t non_edge_hits = 0;

  double non_edge_mass() const {
    return samples == 0 ? 0.0 : static_cast<double>(non_edge_hits) / static_cast<double>(samples);
  }
  double probability(ServerPair key) const {
    auto it = pair_counts.find(key);
    if (it == pair_counts.end() || samples == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(samples);
  }
};

// Empirical probability that each server is the nearest server of a uniform
// random user (the normalized Voronoi cell areas).
struct VertexProbabilityEstimate {
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> counts;

  double probability(std::uint32_t server) const {
    return samples == 0 ? 0.0
                        : static_cast<double>(counts[server]) / static_cast<double>(samples);
  }
};

// Empirical distribution of the second-nearest server conditioned on the
// nearest, for grid layouts.
struct ConditionalSecondNearestEstimate {
  std::uint64_t samples = 0;
  std::vector<std::uint64_t> nearest_counts;        // per nearest server
  std::map<ServerPair, std::uint64_t> cond_counts;  // (nearest, second) ordered key
  std::uint64_t non_neighbor_hits = 0;

  double conditional(std::uint32_t nearest, std::uint32_t second) const {
    auto it = cond_counts.find({nearest, second});
    if (it == cond_counts.end() || nearest_counts[nearest] == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(nearest_counts[nearest]);
  }
};

// Nonempty cells of the second-order Voronoi diagram, estimated by dense
// probing: each distinct unordered two-nearest pair marks one cell, and its
// hit fraction estimates the cell area.
struct SecondOrderCellEstimate {
  std::uint64_t probes = 0;
  std::map<ServerPair, std::uint64_t> pair_areas;  // counts; divide by probes for area

  std::size_t distinct_pairs() const { return pair_areas.size(); }
};

namespace detail {

inline Point probe_point(std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::stream(seed, {tag::probe, index});
  const double x = rng.uniform01();
  const double y = rng.uniform01();
  return {x, y};
}

// Runs fn(lo, hi, slot) over a block partition of [0, total); slot results
// must be merged in slot order by the caller. Probe randomness is derived
// from the probe index, so any partition yields identical totals.
template <typename Fn>
void run_blocks(std::uint64_t total, int threads, Fn&& fn) {
  if (threads <= 1 || total < 2) {
    fn(std::uint64_t{0}, total, 0);
    return;
  }
  const auto t = static_cast<std::uint64_t>(threads);
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::uint64_t s = 0; s < t; ++s) {
    const std::uint64_t lo = total * s / t;
    const std::uint64_t hi = total * (s + 1) / t;
    pool.emplace_back([&fn, lo, hi, s] { fn(lo, hi, static_cast<int>(s)); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline EdgeProbabilityEstimate estimate_edge_probabilities(const ServerLayout& layout,
                                                           const DelaunayGraph& graph,
                                                           std::uint64_t probes,
                                                           std::uint64_t seed, int threads = 1) {
  std::vector<EdgeProbabilityEstimate> partial(std::max(1, threads));
  detail::run_blocks(probes, threads, [&](std::uint64_t lo, std::uint64_t hi, int slot) {
    EdgeProbabilityEstimate& est = partial[slot];
    std::vector<Neighbor> nn;
    for (std::uint64_t i = lo; i < hi; ++i) {
      layout.k_nearest(detail::probe_point(seed, i), 2, nn);
      const ServerPair key = make_pair_key(nn[0].id, nn[1].id);
      ++est.pair_counts[key];
      if (!graph.has_edge(key.first, key.second)) ++est.non_edge_hits;
    }
    est.samples = hi - lo;
  });

  EdgeProbabilityEstimate out = std::move(partial[0]);
  for (std::size_t s = 1; s < partial.size(); ++s) {
    out.samples += partial[s].samples;
    out.non_edge_hits += partial[s].non_edge_hits;
    for (const auto& [k, c] : partial[s].pair_counts) out.pair_counts[k] += c;
  }
  return out;
}

inline VertexProbabilityEstimate estimate_vertex_probabilities(const ServerLayout& layout,
                                                               std::uint64_t probes,
                                                               std::uint64_t seed,
                                                               int threads = 1) {
  std::vector<VertexProbabilityEstimate> partial(std::max(1, threads));
  detail::run_blocks(probes, threads, [&](std::uint64_t lo, std::uint64_t hi, int slot) {
    VertexProbabilityEstimate& est = partial[slot];
    est.counts.assign(layout.points().size(), 0);
    std::vector<Neighbor> nn;
    for (std::uint64_t i = lo; i < hi; ++i) {
      layout.k_nearest(detail::probe_point(seed, i), 1, nn);
      ++est.counts[nn[0].id];
    }
    est.samples = hi - lo;
  });

  VertexProbabilityEstimate out = std::move(partial[0]);
  for (std::size_t s = 1; s < partial.size(); ++s) {
    out.samples += partial[s].samples;
    for (std::size_t v = 0; v < out.counts.size(); ++v) out.counts[v] += partial[s].counts[v];
  }
  return out;
}

inline bool grid_rook_neighbors(int side, std::uint32_t a, std::uint32_t b) {
  const auto [ax, ay] = grid_coords(side, a);
  const auto [bx, by] = grid_coords(side, b);
  const int dx = std::min((ax - bx + side) % side, (bx - ax + side) % side);
  const int dy = std::min((ay - by + side) % side, (by - ay + side) % side);
  return (dx == 1 && dy == 0) || (dx == 0 && dy == 1);
}

// Tallies explicit probe points; the random-probe overload derives them from
// the seed. Grid layouts only.
inline ConditionalSecondNearestEstimate estimate_conditional_second_nearest(
    const ServerLayout& layout, std::span<const Point> probe_points) {
  if (!layout.is_grid()) {
    throw std::invalid_argument("estimate_conditional_second_nearest: grid layout required");
  }
  const int side = layout.grid_side();
  ConditionalSecondNearestEstimate est;
  est.nearest_counts.assign(layout.points().size(), 0);
  std::vector<Neighbor> nn;
  for (const Point& p : probe_points) {
    layout.k_nearest(p, 2, nn);
    ++est.nearest_counts[nn[0].id];
    ++est.cond_counts[{nn[0].id, nn[1].id}];
    if (!grid_rook_neighbors(side, nn[0].id, nn[1].id)) ++est.non_neighbor_hits;
    ++est.samples;
  }
  return est;
}

inline ConditionalSecondNearestEstimate estimate_conditional_second_nearest(
    const ServerLayout& layout, std::uint64_t probes, std::uint64_t seed, int threads = 1) {
  if (!layout.is_grid()) {
    throw std::invalid_argument("estimate_conditional_second_nearest: grid layout required");
  }
  const int side = layout.grid_side();
  std::vector<ConditionalSecondNearestEstimate> partial(std::max(1, threads));
  detail::run_blocks(probes, threads, [&](std::uint64_t lo, std::uint64_t hi, int slot) {
    ConditionalSecondNearestEstimate& est = partial[slot];
    est.nearest_counts.assign(layout.points().size(), 0);
    std::vector<Neighbor> nn;
    for (std::uint64_t i = lo; i < hi; ++i) {
      layout.k_nearest(detail::probe_point(seed, i), 2, nn);
      ++est.nearest_counts[nn[0].id];
      ++est.cond_counts[{nn[0].id, nn[1].id}];
      if (!grid_rook_neighbors(side, nn[0].id, nn[1].id)) ++est.non_neighbor_hits;
    }
    est.samples = hi - lo;
  });

  ConditionalSecondNearestEstimate out = std::move(partial[0]);
  for (std::size_t s = 1; s < partial.size(); ++s) {
    out.samples += partial[s].samples;
    out.non_neighbor_hits += partial[s].non_neighbor_hits;
    for (std::size_t v = 0; v < out.nearest_counts.size(); ++v) {
      out.nearest_counts[v] += partial[s].nearest_counts[v];
    }
    for (const auto& [k, c] : partial[s].cond_counts) out.cond_counts[k] += c;
  }
  return out;
}

inline SecondOrderCellEstimate estimate_second_order_cells(const ServerLayout& layout,
                                                           std::uint64_t probes,
                                                           std::uint64_t seed, int threads = 1) {
  std::vector<SecondOrderCellEstimate> partial(std::max(1, threads));
  detail::run_blocks(probes, threads, [&](std::uint64_t lo, std::uint64_t hi, int slot) {
    SecondOrderCellEstimate& est = partial[slot];
    std::vector<Neighbor> nn;
    for (std::uint64_t i = lo; i < hi; ++i) {
      layout.k_nearest(detail::probe_point(seed, i), 2, nn);
      ++est.pair_areas[make_pair_key(nn[0].id, nn[1].id)];
    }
    est.probes = hi - lo;
  });

  SecondOrderCellEstimate out = std::move(partial[0]);
  for (std::size_t s = 1; s < partial.size(); ++s) {
    out.probes += partial[s].probes;
    for (const auto& [k, c] : partial[s].pair_areas) out.pair_areas[k] += c;
  }
  return out;
}

// CSV serializations: `pair_i,pair_j,count,probability` rows with a header.
inline void write_pair_counts_csv(std::ostream& os, const EdgeProbabilityEstimate& est) {
  os << "pair_i,pair_j,count,probability\n";
  for (const auto& [key, count] : est.pair_counts) {
    os << key.first << ',' << key.second << ',' << count << ',' << est.probability(key) << '\n';
  }
}

inline void write_pair_counts_csv(std::ostream& os, const SecondOrderCellEstimate& est) {
  os << "pair_i,pair_j,count,probability\n";
  for (const auto& [key, count] : est.pair_areas) {
    const double p =
        est.probes == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(est.probes);
    os << key.first << ',' << key.second << ',' << count << ',' << p << '\n';
  }
}

inline void write_vertex_counts_csv(std::ostream& os, const VertexProbabilityEstimate& est) {
  os << "server,count,probability\n";
  for (std::uint32_t v = 0; v < est.counts.size(); ++v) {
    os << v << ',' << est.counts[v] << ',' << est.probability(v) << '\n';
  }
}

inline void write_conditional_csv(std::ostream& os, const ConditionalSecondNearestEstimate& est) {
  os << "server,second,count,conditional_probability\n";
  for (const auto& [key, count] : est.cond_counts) {
    os << key.first << ',' << key.second << ',' << count << ',' << est.conditional(key.first, key.second)
       << '\n';
  }
}

}  // namespace spotlab
