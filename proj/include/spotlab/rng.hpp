#pragma once

#include <cstdint>
#include <array>
#include <initializer_list>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace spotlab {

// splitmix64 finalizer; the backbone of all seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a sub-seed from (seed, tag).
inline std::uint64_t splitmix64_once(std::uint64_t seed, std::uint64_t t) {
  std::uint64_t st = seed ^ t;
  return splitmix64(st);
}

// Stream tags keep derived generators disjoint across uses of one scenario
// seed. Every consumer of randomness names its stream explicitly:
//   Rng::stream(seed, {tag::users, trial, user_index})
namespace tag {
inline constexpr std::uint64_t layout = 0x01;
inline constexpr std::uint64_t users = 0x02;
inline constexpr std::uint64_t alloc = 0x03;
inline constexpr std::uint64_t probe = 0x04;
inline constexpr std::uint64_t mobility = 0x05;
inline constexpr std::uint64_t trial = 0x06;
inline constexpr std::uint64_t oracle = 0x07;
}  // namespace tag

// xoshiro256++ with splitmix64 stream derivation. Cheap to construct, so
// per-user and per-probe streams are derived on the fly; any draw is
// reproducible from (seed, tags) alone, independent of scheduling.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t st = seed;
    for (auto& w : s_) w = splitmix64(st);
  }

  static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    return Rng(derive_seed(seed, tags));
  }

  // Chained splitmix64 derivation; the same (seed, tags) always yields the
  // same sub-seed, and distinct tag paths yield independent streams. Each
  // step feeds the fully mixed output forward so no structure of the tag
  // values survives into the derived stream.
  static std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t st = seed;
    std::uint64_t mixed = splitmix64(st);
    for (std::uint64_t t : tags) {
      st = mixed ^ t;
      mixed = splitmix64(st);
    }
    return mixed;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), a multiple of 2^-53.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t x = next();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next();
        m = static_cast<unsigned __int128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Two distinct indices in [0, n), n >= 2, unordered in distribution.
  std::pair<std::uint32_t, std::uint32_t> two_distinct_below(std::uint32_t n) {
    const auto i = static_cast<std::uint32_t>(below(n));
    auto j = static_cast<std::uint32_t>(below(n - 1));
    if (j >= i) ++j;
    return {i, j};
  }

  bool coin() { return (next() >> 63) != 0; }

  // UniformRandomBitGenerator interface.
  std::uint64_t operator()() { return next(); }
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return std::numeric_limits<std::uint64_t>::max(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

// Walker/Vose alias table for O(1) categorical sampling. Weights need not be
// normalized; they must be finite, nonnegative, with positive sum.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("AliasTable: empty weight vector");
    double total = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || w != w) throw std::invalid_argument("AliasTable: weights must be nonnegative");
      total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("AliasTable: weights sum to zero");

    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.back();
      const std::uint32_t l = large.back();
      small.pop_back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] -= 1.0 - scaled[s];
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    for (std::uint32_t i : large) prob_[i] = 1.0;
    for (std::uint32_t i : small) prob_[i] = 1.0;  // numerical leftovers
  }

  std::uint32_t sample(Rng& rng) const {
    const auto slot = static_cast<std::uint32_t>(rng.below(prob_.size()));
    return rng.uniform01() < prob_[slot] ? slot : alias_[slot];
  }

  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace spotlab
