#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spotlab/csv.hpp"
#include "spotlab/geom.hpp"
#include "spotlab/mobility.hpp"
#include "spotlab/policy.hpp"
#include "spotlab/rng.hpp"

namespace spotlab {

// One experiment: a placement, a policy, and a trial/seed discipline. All
// randomness in a run is derived from `seed`, so reports are pure functions
// of the config.
struct ScenarioConfig {
  enum class Placement { grid, uniform };

  Placement placement = Placement::uniform;
  int n = 0;       // servers; grid placement requires n to be a perfect square
  int m = 0;       // users; 0 means m = n
  PolicyKind policy = PolicyKind::sPOT();
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<MobilityConfig> mobility;

  int users() const { return m == 0 ? n : m; }

  int grid_side() const {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    return side;
  }

  void validate() const {
    if (n < 2) throw std::invalid_argument("ScenarioConfig: n must be >= 2");
    if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials must be >= 1");
    if (m < 0) throw std::invalid_argument("ScenarioConfig: m must be >= 0");
    if (placement == Placement::grid) {
      const int side = grid_side();
      if (side * side != n) {
        throw std::invalid_argument("ScenarioConfig: grid placement requires n to be a square");
      }
      if (side < 2) throw std::invalid_argument("ScenarioConfig: grid side must be >= 2");
    }
    if (policy.family == PolicyKind::Family::kspot && policy.k > n) {
      throw std::invalid_argument("ScenarioConfig: k-sPOT k exceeds n");
    }
    if (mobility) mobility->validate();
  }
};

struct Aggregate {
  double mean = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  static Aggregate of(std::span<const double> values) {
    Aggregate a;
    if (values.empty()) return a;
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - a.mean) * (v - a.mean);
      const double var = ss / static_cast<double>(values.size() - 1);
      a.se = std::sqrt(var / static_cast<double>(values.size()));
    }
    a.ci_low = a.mean - 1.96 * a.se;
    a.ci_high = a.mean + 1.96 * a.se;
    return a;
  }
};

struct TrialRecord {
  std::uint32_t max_load = 0;
  double mean_distance = 0.0;
};

// Fixed histogram schema: integer bins for loads (index = load value) and
// 100 equal-width bins over [0, observed max] for distances.
struct DistanceHistogram {
  static constexpr int kBins = 100;
  double max_value = 0.0;
  std::vector<std::uint64_t> counts = std::vector<std::uint64_t>(kBins, 0);
  std::uint64_t total = 0;

  static DistanceHistogram of(std::span<const double> values) {
    DistanceHistogram h;
    for (double v : values) h.max_value = std::max(h.max_value, v);
    h.total = values.size();
    if (h.max_value == 0.0) {
      if (!values.empty()) h.counts[0] = values.size();
      return h;
    }
    for (double v : values) {
      int bin = static_cast<int>(v / h.max_value * kBins);
      if (bin >= kBins) bin = kBins - 1;
      ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
  }
};

inline std::vector<std::uint64_t> load_histogram(std::span<const std::uint32_t> loads) {
  std::uint32_t mx = 0;
  for (auto l : loads) mx = std::max(mx, l);
  std::vector<std::uint64_t> h(static_cast<std::size_t>(mx) + 1, 0);
  for (auto l : loads) ++h[l];
  return h;
}

// 0.5 * L1 distance between two integer-bin histograms (each normalized).
inline double total_variation(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  double ta = 0.0, tb = 0.0;
  for (auto v : a) ta += static_cast<double>(v);
  for (auto v : b) tb += static_cast<double>(v);
  if (ta == 0.0 || tb == 0.0) throw std::invalid_argument("total_variation: empty histogram");
  double acc = 0.0;
  const std::size_t len = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < len; ++i) {
    const double pa = i < a.size() ? static_cast<double>(a[i]) / ta : 0.0;
    const double pb = i < b.size() ? static_cast<double>(b[i]) / tb : 0.0;
    acc += std::fabs(pa - pb);
  }
  return 0.5 * acc;
}

struct ScenarioReport {
  std::vector<TrialRecord> trial_records;
  Aggregate max_load;
  Aggregate mean_distance;
  std::vector<std::uint64_t> load_hist;  // summed over trials
  DistanceHistogram dist_hist;           // over all trials' request distances
};

// The per-trial inputs (servers and user positions) depend only on
// (config, trial), never on the policy: comparative suites reuse them so
// every policy sees identical realizations.
inline std::pair<ServerLayout, std::vector<Point>> make_trial_inputs(const ScenarioConfig& cfg,
                                                                     int trial) {
  ServerLayout layout =
      cfg.placement == ScenarioConfig::Placement::grid
          ? make_grid_layout(cfg.grid_side())
          : make_uniform_layout(cfg.n, Rng::derive_seed(cfg.seed, {tag::layout,
                                                                   static_cast<std::uint64_t>(trial)}));
  const int m = cfg.users();
  std::vector<Point> users;
  users.reserve(static_cast<std::size_t>(m));
  Rng urng = Rng::stream(cfg.seed, {tag::users, static_cast<std::uint64_t>(trial)});
  for (int i = 0; i < m; ++i) {
    const double x = urng.uniform01();
    const double y = urng.uniform01();
    users.push_back({x, y});
  }
  if (cfg.mobility) {
    // User i is allocated at time i * warmup_per_user; servers stay static.
    for (int i = 0; i < m; ++i) {
      Rng mrng = Rng::stream(cfg.seed, {tag::mobility, static_cast<std::uint64_t>(trial),
                                        static_cast<std::uint64_t>(i)});
      users[static_cast<std::size_t>(i)] =
          evolve_position(users[static_cast<std::size_t>(i)], *cfg.mobility,
                          cfg.mobility->warmup_per_user * i, mrng);
    }
  }
  return {std::move(layout), std::move(users)};
}

inline std::uint64_t trial_alloc_seed(const ScenarioConfig& cfg, int trial) {
  return Rng::derive_seed(cfg.seed, {tag::alloc, static_cast<std::uint64_t>(trial)});
}

inline ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioReport report;
  std::vector<double> max_loads, mean_dists, all_distances;
  for (int t = 0; t < cfg.trials; ++t) {
    auto [layout, users] = make_trial_inputs(cfg, t);
    const AllocationResult result = allocate(layout, users, cfg.policy, trial_alloc_seed(cfg, t));
    TrialRecord rec{result.max_load(), result.mean_distance()};
    report.trial_records.push_back(rec);
    max_loads.push_back(static_cast<double>(rec.max_load));
    mean_dists.push_back(rec.mean_distance);
    all_distances.insert(all_distances.end(), result.request_distance.begin(),
                         result.request_distance.end());
    auto h = load_histogram(result.loads);
    if (h.size() > report.load_hist.size()) report.load_hist.resize(h.size(), 0);
    for (std::size_t i = 0; i < h.size(); ++i) report.load_hist[i] += h[i];
  }
  report.max_load = Aggregate::of(max_loads);
  report.mean_distance = Aggregate::of(mean_dists);
  report.dist_hist = DistanceHistogram::of(all_distances);
  return report;
}

// ---------------------------------------------------------------------------
// Tradeoff suite: all six policies on identical per-trial inputs.

struct PolicyRow {
  PolicyKind policy;
  std::vector<TrialRecord> trial_records;
  Aggregate max_load;
  Aggregate mean_distance;
  bool loads_conserved = true;
};

struct TradeoffReport {
  int n = 0;
  int m = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<PolicyRow> rows;

  const PolicyRow& row(PolicyKind kind) const {
    for (const auto& r : rows) {
      if (r.policy == kind) return r;
    }
    throw std::invalid_argument("TradeoffReport: no such policy row");
  }
};

inline TradeoffReport run_tradeoff_suite(int n, int trials, std::uint64_t seed) {
  ScenarioConfig base;
  base.placement = ScenarioConfig::Placement::uniform;
  base.n = n;
  base.trials = trials;
  base.seed = seed;
  base.validate();

  const std::vector<PolicyKind> policies{PolicyKind::POO(),  PolicyKind::POT(),
                                         PolicyKind::sPOO(), PolicyKind::sPOT(),
                                         PolicyKind::dPOT(), PolicyKind::kSPOT(default_kspot_k(n))};
  TradeoffReport report;
  report.n = n;
  report.m = base.users();
  report.trials = trials;
  report.seed = seed;
  for (auto kind : policies) report.rows.push_back(PolicyRow{kind, {}, {}, {}, true});

  for (int t = 0; t < trials; ++t) {
    auto [layout, users] = make_trial_inputs(base, t);
    const std::uint64_t alloc_seed = trial_alloc_seed(base, t);
    for (auto& row : report.rows) {
      const AllocationResult result = allocate(layout, users, row.policy, alloc_seed);
      row.trial_records.push_back({result.max_load(), result.mean_distance()});
      std::uint64_t total = 0;
      for (auto l : result.loads) total += l;
      row.loads_conserved = row.loads_conserved && total == users.size();
    }
  }
  for (auto& row : report.rows) {
    std::vector<double> ml, md;
    for (const auto& rec : row.trial_records) {
      ml.push_back(static_cast<double>(rec.max_load));
      md.push_back(rec.mean_distance);
    }
    row.max_load = Aggregate::of(ml);
    row.mean_distance = Aggregate::of(md);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Distribution study: single paired run, full load and distance histograms.

struct DistributionRow {
  PolicyKind policy;
  std::uint32_t max_load = 0;
  double mean_distance = 0.0;
  std::vector<std::uint64_t> load_hist;
  DistanceHistogram dist_hist;
};

struct DistributionStudy {
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<DistributionRow> rows;

  const DistributionRow& row(PolicyKind kind) const {
    for (const auto& r : rows) {
      if (r.policy == kind) return r;
    }
    throw std::invalid_argument("DistributionStudy: no such policy row");
  }
};

inline DistributionStudy run_distribution_study(int n, std::uint64_t seed) {
  ScenarioConfig base;
  base.placement = ScenarioConfig::Placement::uniform;
  base.n = n;
  base.trials = 1;
  base.seed = seed;
  base.validate();

  DistributionStudy study;
  study.n = n;
  study.seed = seed;
  auto [layout, users] = make_trial_inputs(base, 0);
  const std::uint64_t alloc_seed = trial_alloc_seed(base, 0);
  for (auto kind : {PolicyKind::dPOT(), PolicyKind::POT(), PolicyKind::sPOT()}) {
    const AllocationResult result = allocate(layout, users, kind, alloc_seed);
    DistributionRow row;
    row.policy = kind;
    row.max_load = result.max_load();
    row.mean_distance = result.mean_distance();
    row.load_hist = load_histogram(result.loads);
    row.dist_hist = DistanceHistogram::of(result.request_distance);
    study.rows.push_back(std::move(row));
  }
  return study;
}

// ---------------------------------------------------------------------------
// Scaling sweeps and growth-law diagnostics.

enum class Trend { increasing, decreasing, mixed, insufficient };

inline const char* trend_name(Trend t) {
  switch (t) {
    case Trend::increasing: return "increasing";
    case Trend::decreasing: return "decreasing";
    case Trend::mixed: return "mixed";
    case Trend::insufficient: return "insufficient points";
  }
  return "?";
}

// Ratio diagnostics: growth relative to the one-choice law ln n / ln ln n
// (r1) and to the two-choice law ln ln n (r2).
inline double ratio_to_one_choice_law(double max_load, int n) {
  const double ln = std::log(static_cast<double>(n));
  return max_load / (ln / std::log(ln));
}
inline double ratio_to_two_choice_law(double max_load, int n) {
  return max_load / std::log(std::log(static_cast<double>(n)));
}

inline Trend strict_trend(std::span<const double> series) {
  if (series.size() < 2) return Trend::insufficient;
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < series.size(); ++i) {
    inc = inc && series[i] > series[i - 1];
    dec = dec && series[i] < series[i - 1];
  }
  if (inc) return Trend::increasing;
  if (dec) return Trend::decreasing;
  return Trend::mixed;
}

// Spearman rank correlation against the index order (series assumed indexed
// by ascending n). +1 for strictly increasing, -1 for strictly decreasing.
inline double spearman_against_index(std::span<const double> series) {
  const std::size_t len = series.size();
  if (len < 2) return 0.0;
  std::vector<std::size_t> idx(len);
  for (std::size_t i = 0; i < len; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return series[a] < series[b] || (series[a] == series[b] && a < b);
  });
  std::vector<double> rank(len);
  for (std::size_t r = 0; r < len; ++r) rank[idx[r]] = static_cast<double>(r);
  double d2 = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double d = rank[i] - static_cast<double>(i);
    d2 += d * d;
  }
  const auto dn = static_cast<double>(len);
  return 1.0 - 6.0 * d2 / (dn * (dn * dn - 1.0));
}

// A sweep policy may adapt to n (the "k = log n" rule); the label stays
// stable across the sweep for grouping and CSV output.
struct SweepPolicy {
  std::string label;
  std::function<PolicyKind(int)> make;

  static SweepPolicy fixed(PolicyKind kind) {
    return {kind.name(), [kind](int) { return kind; }};
  }
  static SweepPolicy kspot_log_n() {
    return {"kspot_ln", [](int n) { return PolicyKind::kSPOT(default_kspot_k(n)); }};
  }
  static SweepPolicy kspot_fixed(int k) { return SweepPolicy::fixed(PolicyKind::kSPOT(k)); }
};

struct SweepCell {
  int n = 0;
  std::string policy_label;
  PolicyKind policy;
  bool skipped = false;
  std::string note;
  double mean_max_load = 0.0;
  double se = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

// Trend verdicts are the sign of the Spearman rank correlation of the ratio
// series against n: the asymptotic laws the ratios test only speak to the
// overall direction of growth, not to every consecutive step at desk scale.
// The strict leg-by-leg classification is reported alongside.
struct PolicyTrend {
  std::string policy_label;
  std::vector<double> r1_series;
  std::vector<double> r2_series;
  std::vector<double> mean_series;
  Trend r1_trend = Trend::insufficient;  // Spearman-sign verdict
  Trend r2_trend = Trend::insufficient;
  Trend r1_strict = Trend::insufficient;  // every consecutive step
  Trend r2_strict = Trend::insufficient;
  double r1_spearman = 0.0;
  double r2_spearman = 0.0;
};

inline Trend spearman_sign_trend(std::span<const double> series, double rho) {
  if (series.size() < 2) return Trend::insufficient;
  if (rho > 0.0) return Trend::increasing;
  if (rho < 0.0) return Trend::decreasing;
  return Trend::mixed;
}

struct SweepReport {
  std::vector<int> n_values;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<SweepCell> cells;
  std::vector<PolicyTrend> trends;

  const SweepCell& cell(const std::string& label, int n) const {
    for (const auto& c : cells) {
      if (c.policy_label == label && c.n == n) return c;
    }
    throw std::invalid_argument("SweepReport: no such cell");
  }
  const PolicyTrend& trend(const std::string& label) const {
    for (const auto& t : trends) {
      if (t.policy_label == label) return t;
    }
    throw std::invalid_argument("SweepReport: no such trend");
  }
};

inline SweepReport run_scaling_sweep(std::span<const int> n_values, int trials,
                                     std::span<const SweepPolicy> policies, std::uint64_t seed) {
  if (n_values.empty()) throw std::invalid_argument("run_scaling_sweep: empty n list");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 16) throw std::invalid_argument("run_scaling_sweep: each n must be >= 16");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw std::invalid_argument("run_scaling_sweep: n values must be ascending");
    }
  }
  if (trials < 1) throw std::invalid_argument("run_scaling_sweep: trials must be >= 1");

  SweepReport report;
  report.n_values.assign(n_values.begin(), n_values.end());
  report.trials = trials;
  report.seed = seed;

  for (int n : n_values) {
    ScenarioConfig base;
    base.placement = ScenarioConfig::Placement::uniform;
    base.n = n;
    base.trials = trials;
    base.seed = Rng::derive_seed(seed, {tag::trial, static_cast<std::uint64_t>(n)});
    base.validate();

    // Inputs shared across policies, trial by trial.
    std::vector<std::pair<ServerLayout, std::vector<Point>>> inputs;
    inputs.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) inputs.push_back(make_trial_inputs(base, t));

    for (const auto& sp : policies) {
      SweepCell cell;
      cell.n = n;
      cell.policy_label = sp.label;
      cell.policy = sp.make(n);
      if (cell.policy.family == PolicyKind::Family::kspot && cell.policy.k > n) {
        cell.skipped = true;
        cell.note = "skipped: k exceeds n";
        report.cells.push_back(std::move(cell));
        continue;
      }
      std::vector<double> max_loads;
      max_loads.reserve(static_cast<std::size_t>(trials));
      for (int t = 0; t < trials; ++t) {
        const auto& [layout, users] = inputs[static_cast<std::size_t>(t)];
        const AllocationResult result =
            allocate(layout, users, cell.policy, trial_alloc_seed(base, t));
        max_loads.push_back(static_cast<double>(result.max_load()));
      }
      const Aggregate agg = Aggregate::of(max_loads);
      cell.mean_max_load = agg.mean;
      cell.se = agg.se;
      cell.r1 = ratio_to_one_choice_law(agg.mean, n);
      cell.r2 = ratio_to_two_choice_law(agg.mean, n);
      report.cells.push_back(std::move(cell));
    }
  }

  for (const auto& sp : policies) {
    PolicyTrend trend;
    trend.policy_label = sp.label;
    for (const auto& cell : report.cells) {
      if (cell.policy_label == sp.label && !cell.skipped) {
        trend.mean_series.push_back(cell.mean_max_load);
        trend.r1_series.push_back(cell.r1);
        trend.r2_series.push_back(cell.r2);
      }
    }
    trend.r1_strict = strict_trend(trend.r1_series);
    trend.r2_strict = strict_trend(trend.r2_series);
    trend.r1_spearman = spearman_against_index(trend.r1_series);
    trend.r2_spearman = spearman_against_index(trend.r2_series);
    trend.r1_trend = spearman_sign_trend(trend.r1_series, trend.r1_spearman);
    trend.r2_trend = spearman_sign_trend(trend.r2_series, trend.r2_spearman);
    report.trends.push_back(std::move(trend));
  }
  return report;
}

struct ConjectureReport {
  int k_fixed = 0;
  SweepReport sweep;
  Trend r2_trend = Trend::insufficient;
  bool consistent_with_conjecture = false;
};

// Probes whether a fixed candidate-set size loses the two-choice benefit:
// consistent when the max-load-to-ln-ln-n ratio keeps growing.
inline ConjectureReport run_conjecture_probe(std::span<const int> n_values, int k_fixed,
                                             int trials, std::uint64_t seed) {
  if (k_fixed < 2) throw std::invalid_argument("run_conjecture_probe: k_fixed must be >= 2");
  ConjectureReport report;
  report.k_fixed = k_fixed;
  const SweepPolicy policy = SweepPolicy::kspot_fixed(k_fixed);
  report.sweep = run_scaling_sweep(n_values, trials, std::span<const SweepPolicy>(&policy, 1), seed);
  report.r2_trend = report.sweep.trends[0].r2_trend;
  report.consistent_with_conjecture = report.r2_trend == Trend::increasing;
  return report;
}

// ---------------------------------------------------------------------------
// Mobility study: sPOT under user motion, one row per velocity.

struct MobilityStudyRow {
  double velocity = 0.0;
  Aggregate max_load;
};

struct MobilityStudyReport {
  int n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  MobilityConfig base;
  std::vector<MobilityStudyRow> rows;
};

inline MobilityStudyReport run_mobility_study(int n, int trials, std::span<const double> velocities,
                                              std::uint64_t seed,
                                              MobilityConfig base = MobilityConfig{}) {
  MobilityStudyReport report;
  report.n = n;
  report.trials = trials;
  report.seed = seed;
  report.base = base;
  for (double v : velocities) {
    ScenarioConfig cfg;
    cfg.placement = ScenarioConfig::Placement::uniform;
    cfg.n = n;
    cfg.policy = PolicyKind::sPOT();
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.mobility = base;
    cfg.mobility->v_max = v;
    const ScenarioReport scenario = run_scenario(cfg);
    report.rows.push_back({v, scenario.max_load});
  }
  return report;
}

// ---------------------------------------------------------------------------
// CSV writers. Column orders are part of the tool's contract.

struct SummaryRow {
  std::string policy;
  int n = 0;
  int trials = 0;
  Aggregate max_load;
  Aggregate mean_distance;
};

inline void write_summary_csv(std::ostream& os, std::span<const SummaryRow> rows) {
  os << "policy,n,trials,mean_max_load,ci_low,ci_high,mean_distance,ci_low,ci_high\n";
  for (const auto& r : rows) {
    os << r.policy << ',' << r.n << ',' << r.trials << ',' << csv_num(r.max_load.mean) << ','
       << csv_num(r.max_load.ci_low) << ',' << csv_num(r.max_load.ci_high) << ','
       << csv_num(r.mean_distance.mean) << ',' << csv_num(r.mean_distance.ci_low) << ','
       << csv_num(r.mean_distance.ci_high) << '\n';
  }
}

inline std::vector<SummaryRow> summary_rows(const TradeoffReport& report) {
  std::vector<SummaryRow> rows;
  for (const auto& r : report.rows) {
    rows.push_back({r.policy.name(), report.n, report.trials, r.max_load, r.mean_distance});
  }
  return rows;
}

inline std::vector<SummaryRow> summary_rows(const ScenarioConfig& cfg,
                                            const ScenarioReport& report) {
  return {SummaryRow{cfg.policy.name(), cfg.n, cfg.trials, report.max_load, report.mean_distance}};
}

struct LoadHistRow {
  std::string policy;
  const std::vector<std::uint64_t>* hist;
};

inline void write_load_hist_csv(std::ostream& os, std::span<const LoadHistRow> rows) {
  os << "policy,load,count,fraction\n";
  for (const auto& r : rows) {
    std::uint64_t total = 0;
    for (auto c : *r.hist) total += c;
    for (std::size_t load = 0; load < r.hist->size(); ++load) {
      const double frac =
          total == 0 ? 0.0 : static_cast<double>((*r.hist)[load]) / static_cast<double>(total);
      os << r.policy << ',' << load << ',' << (*r.hist)[load] << ',' << csv_num(frac) << '\n';
    }
  }
}

struct DistHistRow {
  std::string policy;
  const DistanceHistogram* hist;
};

inline void write_dist_hist_csv(std::ostream& os, std::span<const DistHistRow> rows) {
  os << "policy,bin,bin_low,bin_high,count,fraction\n";
  for (const auto& r : rows) {
    const auto& h = *r.hist;
    const double width = h.max_value / DistanceHistogram::kBins;
    for (int b = 0; b < DistanceHistogram::kBins; ++b) {
      const double frac = h.total == 0 ? 0.0
                                       : static_cast<double>(h.counts[static_cast<std::size_t>(b)]) /
                                             static_cast<double>(h.total);
      os << r.policy << ',' << b << ',' << csv_num(b * width) << ',' << csv_num((b + 1) * width)
         << ',' << h.counts[static_cast<std::size_t>(b)] << ',' << csv_num(frac) << '\n';
    }
  }
}

inline void write_sweep_csv(std::ostream& os, const SweepReport& report) {
  os << "n,policy,mean_max_load,se,r1,r2\n";
  for (const auto& c : report.cells) {
    if (c.skipped) {
      os << c.n << ',' << c.policy_label << ",nan,nan,nan,nan\n";
      continue;
    }
    os << c.n << ',' << c.policy_label << ',' << csv_num(c.mean_max_load) << ',' << csv_num(c.se)
       << ',' << csv_num(c.r1) << ',' << csv_num(c.r2) << '\n';
  }
}

inline void write_trend_verdicts(std::ostream& os, const SweepReport& report) {
  for (const auto& t : report.trends) {
    os << "policy=" << t.policy_label << " r1_trend=" << trend_name(t.r1_trend)
       << " r1_spearman=" << csv_num(t.r1_spearman) << " r1_strict=" << trend_name(t.r1_strict)
       << " r2_trend=" << trend_name(t.r2_trend) << " r2_spearman=" << csv_num(t.r2_spearman)
       << " r2_strict=" << trend_name(t.r2_strict) << '\n';
  }
  for (const auto& t : report.trends) {
    bool dipped = false;
    for (std::size_t i = 1; i < t.mean_series.size(); ++i) {
      dipped = dipped || t.mean_series[i] < t.mean_series[i - 1];
    }
    if (dipped) {
      os << "warning: policy=" << t.policy_label
         << " mean max load dips somewhere in n (statistical wobble)\n";
    }
  }
  for (const auto& c : report.cells) {
    if (c.skipped) {
      os << "warning: policy=" << c.policy_label << " n=" << c.n << " " << c.note << '\n';
    }
  }
}

inline void write_mobility_summary_csv(std::ostream& os, const MobilityStudyReport& report) {
  os << "velocity,n,trials,mean_max_load,ci_low,ci_high\n";
  for (const auto& r : report.rows) {
    os << csv_num(r.velocity) << ',' << report.n << ',' << report.trials << ','
       << csv_num(r.max_load.mean) << ',' << csv_num(r.max_load.ci_low) << ','
       << csv_num(r.max_load.ci_high) << '\n';
  }
}

}  // namespace spotlab
