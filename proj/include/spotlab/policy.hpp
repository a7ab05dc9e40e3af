#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spotlab/geom.hpp"
#include "spotlab/rng.hpp"

namespace spotlab {

// The user-to-server allocation policies:
//   POO    one server sampled uniformly at random
//   POT    two servers sampled uniformly at random, least loaded wins
//   sPOO   the geographically nearest server
//   sPOT   least loaded of the two geographically nearest servers
//   k-sPOT two servers sampled uniformly from the k nearest, least loaded wins
//   dPOT   two servers sampled with probability proportional to 1/distance^2
//          (without replacement), least loaded wins
struct PolicyKind {
  enum class Family { poo, pot, spoo, spot, kspot, dpot };

  Family family = Family::poo;
  int k = 0;  // k-sPOT candidate set size

  static PolicyKind POO() { return {Family::poo, 0}; }
  static PolicyKind POT() { return {Family::pot, 0}; }
  static PolicyKind sPOO() { return {Family::spoo, 0}; }
  static PolicyKind sPOT() { return {Family::spot, 0}; }
  static PolicyKind kSPOT(int k) {
    if (k < 2) throw std::invalid_argument("kSPOT: k must be >= 2");
    return {Family::kspot, k};
  }
  static PolicyKind dPOT() { return {Family::dpot, 0}; }

  std::string name() const {
    switch (family) {
      case Family::poo: return "poo";
      case Family::pot: return "pot";
      case Family::spoo: return "spoo";
      case Family::spot: return "spot";
      case Family::kspot: return "kspot" + std::to_string(k);
      case Family::dpot: return "dpot";
    }
    return "?";
  }

  bool operator==(const PolicyKind&) const = default;
};

inline std::optional<PolicyKind> parse_policy(const std::string& text, int k_for_kspot) {
  if (text == "poo") return PolicyKind::POO();
  if (text == "pot") return PolicyKind::POT();
  if (text == "spoo") return PolicyKind::sPOO();
  if (text == "spot") return PolicyKind::sPOT();
  if (text == "dpot") return PolicyKind::dPOT();
  if (text == "kspot") return PolicyKind::kSPOT(k_for_kspot);
  return std::nullopt;
}

// The default k-sPOT candidate set size for scenarios that ask for "log n".
inline int default_kspot_k(int n) {
  return std::max(2, static_cast<int>(std::ceil(std::log(static_cast<double>(n)))));
}

struct AllocationResult {
  std::vector<std::uint32_t> assignment;    // per user: assigned server id
  std::vector<double> request_distance;     // per user
  std::vector<std::uint32_t> loads;         // per server

  std::uint32_t max_load() const {
    std::uint32_t mx = 0;
    for (auto l : loads) mx = std::max(mx, l);
    return mx;
  }
  double mean_distance() const {
    double s = 0.0;
    for (double d : request_distance) s += d;
    return request_distance.empty() ? 0.0 : s / static_cast<double>(request_distance.size());
  }
};

// 1/distance^2 sampling weights for a user, with the distance clamped below
// at 1e-9 so a user sitting exactly on a server keeps a finite weight that
// still dwarfs every other server's.
inline constexpr double kDpotDistanceFloor = 1e-9;

inline void dpot_weights(const ServerLayout& layout, Point u, std::vector<double>& out) {
  const auto& pts = layout.points();
  const Metric metric = layout.metric();
  out.resize(pts.size());
  constexpr double floor_sq = kDpotDistanceFloor * kDpotDistanceFloor;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d2 = distance_sq(u, pts[i], metric);
    out[i] = 1.0 / std::max(d2, floor_sq);
  }
}

inline std::vector<double> dpot_weights(const ServerLayout& layout, Point u) {
  std::vector<double> out;
  dpot_weights(layout, u, out);
  return out;
}

namespace detail {

inline constexpr std::uint32_t kNone = 0xffffffffu;

inline std::uint32_t pick_weighted(std::span<const double> w, double total, std::uint32_t skip,
                                   Rng& rng) {
  const double target = rng.uniform01() * total;
  double acc = 0.0;
  std::uint32_t last_positive = kNone;
  for (std::uint32_t i = 0; i < w.size(); ++i) {
    if (i == skip || w[i] <= 0.0) continue;
    acc += w[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;  // floating point leftovers land on the last positive weight
}

}  // namespace detail

// Draws two distinct indices, the first with probability w_i / sum(w), the
// second from the remainder with renormalized probabilities.
inline std::pair<std::uint32_t, std::uint32_t> sample_two_weighted(std::span<const double> w,
                                                                   Rng& rng) {
  if (w.size() < 2) throw std::invalid_argument("sample_two_weighted: need at least 2 weights");
  double total = 0.0;
  std::size_t positives = 0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("sample_two_weighted: weights must be finite and nonnegative");
    }
    total += v;
    if (v > 0.0) ++positives;
  }
  if (positives < 2) {
    throw std::invalid_argument("sample_two_weighted: need at least 2 positive weights");
  }
  const std::uint32_t first = detail::pick_weighted(w, total, detail::kNone, rng);
  const std::uint32_t second = detail::pick_weighted(w, total - w[first], first, rng);
  return {first, second};
}

namespace detail {

struct CandidateScratch {
  std::vector<Neighbor> nn;
  std::vector<double> weights;
};

// Draws the policy's candidate servers for one user into `out` (one or two
// ids, in draw order). Exposed for tests; allocate() is the engine on top.
inline void draw_candidates(const ServerLayout& layout, Point u, PolicyKind kind, Rng& rng,
                            CandidateScratch& scratch, std::vector<std::uint32_t>& out) {
  const auto n = static_cast<std::uint32_t>(layout.size());
  out.clear();
  switch (kind.family) {
    case PolicyKind::Family::poo:
      out.push_back(static_cast<std::uint32_t>(rng.below(n)));
      break;
    case PolicyKind::Family::pot: {
      const auto [a, b] = rng.two_distinct_below(n);
      out.push_back(a);
      out.push_back(b);
      break;
    }
    case PolicyKind::Family::spoo:
      layout.k_nearest(u, 1, scratch.nn);
      out.push_back(scratch.nn[0].id);
      break;
    case PolicyKind::Family::spot:
      layout.k_nearest(u, 2, scratch.nn);
      out.push_back(scratch.nn[0].id);
      out.push_back(scratch.nn[1].id);
      break;
    case PolicyKind::Family::kspot: {
      if (kind.k > static_cast<int>(n)) {
        throw std::invalid_argument("k-sPOT: k exceeds the number of servers");
      }
      layout.k_nearest(u, kind.k, scratch.nn);
      const auto [a, b] = rng.two_distinct_below(static_cast<std::uint32_t>(kind.k));
      out.push_back(scratch.nn[a].id);
      out.push_back(scratch.nn[b].id);
      break;
    }
    case PolicyKind::Family::dpot: {
      dpot_weights(layout, u, scratch.weights);
      const auto [a, b] = sample_two_weighted(scratch.weights, rng);
      out.push_back(a);
      out.push_back(b);
      break;
    }
  }
}

}  // namespace detail

// Sequentially allocates users (in list order) to servers under the given
// policy. Each user draws its candidates and random tie-breaks from its own
// derived stream, so the result depends only on (layout, users, kind, seed).
inline AllocationResult allocate(const ServerLayout& layout, std::span<const Point> users,
                                 PolicyKind kind, std::uint64_t seed) {
  if (users.empty()) throw std::invalid_argument("allocate: no users");
  if (kind.family == PolicyKind::Family::kspot && kind.k > layout.size()) {
    throw std::invalid_argument("allocate: k-sPOT k exceeds the number of servers");
  }
  const auto n = static_cast<std::size_t>(layout.size());
  AllocationResult result;
  result.assignment.resize(users.size());
  result.request_distance.resize(users.size());
  result.loads.assign(n, 0);

  detail::CandidateScratch scratch;
  std::vector<std::uint32_t> candidates;
  for (std::size_t ui = 0; ui < users.size(); ++ui) {
    Rng rng = Rng::stream(seed, {tag::alloc, ui});
    detail::draw_candidates(layout, users[ui], kind, rng, scratch, candidates);

    std::uint32_t chosen = candidates[0];
    if (candidates.size() == 2) {
      const std::uint32_t a = candidates[0];
      const std::uint32_t b = candidates[1];
      if (result.loads[a] < result.loads[b]) {
        chosen = a;
      } else if (result.loads[b] < result.loads[a]) {
        chosen = b;
      } else {
        chosen = rng.coin() ? a : b;
      }
    }
    result.assignment[ui] = chosen;
    result.request_distance[ui] = distance(users[ui], layout.points()[chosen], layout.metric());
    ++result.loads[chosen];
  }
  return result;
}

// CSV serializations.
inline void write_assignment_csv(std::ostream& os, const AllocationResult& result) {
  os << "user,server,distance\n";
  for (std::size_t u = 0; u < result.assignment.size(); ++u) {
    os << u << ',' << result.assignment[u] << ',' << result.request_distance[u] << '\n';
  }
}

inline void write_loads_csv(std::ostream& os, const AllocationResult& result) {
  os << "server,load\n";
  for (std::size_t s = 0; s < result.loads.size(); ++s) {
    os << s << ',' << result.loads[s] << '\n';
  }
}

}  // namespace spotlab
