#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spotlab/rng.hpp"

namespace spotlab {

// A categorical distribution over bins; entries must sum to 1 within 1e-12.
class ProbabilityVector {
 public:
  explicit ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
    if (p_.empty()) throw std::invalid_argument("ProbabilityVector: empty");
    double total = 0.0;
    for (double v : p_) {
      if (!(v >= 0.0)) throw std::invalid_argument("ProbabilityVector: negative entry");
      total += v;
    }
    if (std::fabs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("ProbabilityVector: entries must sum to 1");
    }
  }

  static ProbabilityVector uniform(int n) {
    if (n < 1) throw std::invalid_argument("ProbabilityVector::uniform: n < 1");
    std::vector<double> p(static_cast<std::size_t>(n), 1.0 / n);
    // Nudge the last entry so the sum is exactly 1 in floating point.
    double partial = 0.0;
    for (int i = 0; i + 1 < n; ++i) partial += p[static_cast<std::size_t>(i)];
    p.back() = 1.0 - partial;
    return ProbabilityVector(std::move(p));
  }

  static ProbabilityVector normalized(std::vector<double> w) {
    double total = 0.0;
    for (double v : w) {
      if (!(v >= 0.0)) throw std::invalid_argument("ProbabilityVector: negative weight");
      total += v;
    }
    if (!(total > 0.0)) throw std::invalid_argument("ProbabilityVector: zero total weight");
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      w[i] /= total;
      partial += w[i];
    }
    w.back() = 1.0 - partial;
    return ProbabilityVector(std::move(w));
  }

  const std::vector<double>& values() const { return p_; }
  int size() const { return static_cast<int>(p_.size()); }

 private:
  std::vector<double> p_;
};

// x majorizes y: descending prefix sums of x dominate those of y and the
// totals agree. Comparisons carry a small tolerance so that nearby floating
// point representations of equal prefix sums do not flip the verdict.
inline bool majorizes(std::span<const double> x, std::span<const double> y, double tol = 1e-9) {
  if (x.size() != y.size() || x.empty()) {
    throw std::invalid_argument("majorizes: vectors must have equal nonzero length");
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double px = 0.0, py = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (px < py - tol) return false;
  }
  px += xs.back();
  py += ys.back();
  return std::fabs(px - py) <= tol;
}

inline bool majorizes(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  std::vector<double> xd(x.begin(), x.end());
  std::vector<double> yd(y.begin(), y.end());
  return majorizes(xd, yd);
}

namespace detail {

// Number of compositions of m into n parts, saturating at the cap.
inline double composition_count(int m, int n, double cap) {
  double c = 1.0;
  for (int i = 1; i < n; ++i) {
    c *= static_cast<double>(m + i) / static_cast<double>(i);
    if (c > cap) return cap + 1.0;
  }
  return c;
}

}  // namespace detail

inline constexpr double kMaxExactCompositions = 1e6;

// E[max bin load] for m balls thrown independently according to p, by full
// enumeration of load vectors weighted with multinomial probabilities.
// Instances with more than ~1e6 compositions are rejected; use
// mc_expected_max for those.
inline double exact_expected_max(int m, const ProbabilityVector& p) {
  const int n = p.size();
  if (m < 1) throw std::invalid_argument("exact_expected_max: m must be >= 1");
  if (detail::composition_count(m, n, kMaxExactCompositions) > kMaxExactCompositions) {
    throw std::invalid_argument(
        "exact_expected_max: instance too large for enumeration; use mc_expected_max");
  }
  const auto& pv = p.values();
  double expect = 0.0;
  // Depth-first over compositions; log-space multinomial weights.
  std::vector<double> log_fact(static_cast<std::size_t>(m) + 1, 0.0);
  for (int i = 2; i <= m; ++i) {
    log_fact[static_cast<std::size_t>(i)] =
        log_fact[static_cast<std::size_t>(i) - 1] + std::log(static_cast<double>(i));
  }
  std::vector<int> x(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int bin, int remaining, int max_so_far) -> void {
    if (bin == n - 1) {
      x[static_cast<std::size_t>(bin)] = remaining;
      const int mx = std::max(max_so_far, remaining);
      double logp = log_fact[static_cast<std::size_t>(m)];
      bool zero = false;
      for (int i = 0; i < n; ++i) {
        const int xi = x[static_cast<std::size_t>(i)];
        logp -= log_fact[static_cast<std::size_t>(xi)];
        if (xi > 0) {
          if (pv[static_cast<std::size_t>(i)] == 0.0) {
            zero = true;
            break;
          }
          logp += xi * std::log(pv[static_cast<std::size_t>(i)]);
        }
      }
      if (!zero) expect += static_cast<double>(mx) * std::exp(logp);
      return;
    }
    for (int xi = 0; xi <= remaining; ++xi) {
      x[static_cast<std::size_t>(bin)] = xi;
      self(self, bin + 1, remaining - xi, std::max(max_so_far, xi));
    }
  };
  rec(rec, 0, m, 0);
  return expect;
}

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t trials = 0;
};

// Monte Carlo E[max bin load]: `trials` independent multinomial draws of m
// balls into |p| bins via an alias table.
inline McEstimate mc_expected_max(int m, const ProbabilityVector& p, std::uint64_t trials,
                                  std::uint64_t seed) {
  if (m < 1) throw std::invalid_argument("mc_expected_max: m must be >= 1");
  if (trials < 1) throw std::invalid_argument("mc_expected_max: trials must be >= 1");
  const AliasTable table{std::span<const double>(p.values())};
  Rng rng = Rng::stream(seed, {tag::trial});

  std::vector<std::uint32_t> counts(p.values().size(), 0);
  std::vector<std::uint32_t> touched;
  touched.reserve(static_cast<std::size_t>(m));
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint32_t mx = 0;
    touched.clear();
    for (int b = 0; b < m; ++b) {
      const std::uint32_t bin = table.sample(rng);
      if (counts[bin]++ == 0) touched.push_back(bin);
      mx = std::max(mx, counts[bin]);
    }
    for (auto bin : touched) counts[bin] = 0;
    sum += mx;
    sumsq += static_cast<double>(mx) * mx;
  }
  McEstimate est;
  est.trials = trials;
  est.mean = sum / static_cast<double>(trials);
  if (trials > 1) {
    const double var =
        std::max(0.0, (sumsq - sum * sum / static_cast<double>(trials)) /
                          static_cast<double>(trials - 1));
    est.se = std::sqrt(var / static_cast<double>(trials));
  }
  return est;
}

struct SchurVerdict {
  McEstimate p_estimate;
  McEstimate q_estimate;
  double combined_se = 0.0;
  bool pass = false;
};

// Checks the Schur-convexity consequence E_p[max] >= E_q[max] (within Monte
// Carlo noise) for p majorizing q.
inline SchurVerdict check_schur_monotonicity(int m, const ProbabilityVector& p,
                                             const ProbabilityVector& q, std::uint64_t trials,
                                             std::uint64_t seed) {
  if (!majorizes(p.values(), q.values())) {
    throw std::invalid_argument("check_schur_monotonicity: p must majorize q");
  }
  SchurVerdict verdict;
  verdict.p_estimate = mc_expected_max(m, p, trials, splitmix64_once(seed, 0x5001));
  verdict.q_estimate = mc_expected_max(m, q, trials, splitmix64_once(seed, 0x5002));
  verdict.combined_se = std::sqrt(verdict.p_estimate.se * verdict.p_estimate.se +
                                  verdict.q_estimate.se * verdict.q_estimate.se);
  verdict.pass =
      verdict.p_estimate.mean >= verdict.q_estimate.mean - 2.0 * verdict.combined_se;
  return verdict;
}

}  // namespace spotlab
