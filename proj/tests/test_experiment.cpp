#include "spotlab/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"

using namespace spotlab;

namespace {

// Monte Carlo oracle: mean distance between two independent uniform points
// in the unit square (the known constant is close to 0.5214, but we measure
// it rather than assume it).
double uniform_pair_distance_oracle(std::uint64_t seed, int samples) {
  Rng rng = Rng::stream(seed, {tag::oracle, 1});
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point a{rng.uniform01(), rng.uniform01()};
    const Point b{rng.uniform01(), rng.uniform01()};
    sum += distance(a, b, Metric::euclidean);
  }
  return sum / samples;
}

// Monte Carlo oracle: mean nearest-server distance for a uniform user among
// n uniform servers.
double nearest_distance_oracle(int n, std::uint64_t seed, int layouts, int probes_per_layout) {
  Rng rng = Rng::stream(seed, {tag::oracle, 2});
  double sum = 0.0;
  for (int l = 0; l < layouts; ++l) {
    auto layout = make_uniform_layout(n, rng.next());
    for (int p = 0; p < probes_per_layout; ++p) {
      const Point u{rng.uniform01(), rng.uniform01()};
      sum += layout.k_nearest(u, 1)[0].dist;
    }
  }
  return sum / (static_cast<double>(layouts) * probes_per_layout);
}

ScenarioConfig basic_config(PolicyKind policy, int n, int trials, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.placement = ScenarioConfig::Placement::uniform;
  cfg.n = n;
  cfg.policy = policy;
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(ScenarioValidation, RejectsBadConfigs) {
  ScenarioConfig cfg = basic_config(PolicyKind::sPOT(), 100, 1, 1);
  cfg.placement = ScenarioConfig::Placement::grid;
  cfg.n = 65;  // not a square
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.n = 64;
  EXPECT_NO_THROW(cfg.validate());
  cfg.trials = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.trials = 1;
  cfg.policy = PolicyKind::kSPOT(100);
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(RunScenario, SingleTrialHasZeroWidthCi) {
  auto report = run_scenario(basic_config(PolicyKind::sPOT(), 100, 1, 5));
  ASSERT_EQ(report.trial_records.size(), 1u);
  EXPECT_EQ(report.max_load.ci_low, report.max_load.ci_high);
  EXPECT_EQ(report.max_load.mean, static_cast<double>(report.trial_records[0].max_load));
}

TEST(RunScenario, SpooMeanDistanceMatchesNearestNeighborOracle) {
  const int n = 10000;
  auto report = run_scenario(basic_config(PolicyKind::sPOO(), n, 10, 42));
  const double oracle = nearest_distance_oracle(n, 7, 4, 20000);
  EXPECT_LT(std::fabs(report.mean_distance.mean - oracle) / oracle, 0.10);
}

TEST(RunScenario, PooMeanDistanceMatchesUniformPairOracle) {
  const int n = 10000;
  auto report = run_scenario(basic_config(PolicyKind::POO(), n, 10, 43));
  const double oracle = uniform_pair_distance_oracle(11, 10000000);
  EXPECT_NEAR(oracle, 0.5214, 0.002);  // sanity on the oracle itself
  EXPECT_LT(std::fabs(report.mean_distance.mean - oracle) / oracle, 0.02);
}

TEST(RunScenario, LoadHistogramCountsServers) {
  const int n = 256;
  auto report = run_scenario(basic_config(PolicyKind::sPOT(), n, 3, 9));
  std::uint64_t total = 0;
  for (auto c : report.load_hist) total += c;
  EXPECT_EQ(total, static_cast<std::uint64_t>(n) * 3);  // n servers per trial
  EXPECT_EQ(report.dist_hist.total, static_cast<std::uint64_t>(n) * 3);
}

TEST(RunScenario, CiShrinksWithMoreTrials) {
  auto few = run_scenario(basic_config(PolicyKind::sPOT(), 400, 10, 21));
  auto many = run_scenario(basic_config(PolicyKind::sPOT(), 400, 40, 21));
  EXPECT_LT(many.max_load.se, few.max_load.se);
}

TEST(TrialInputs, PairedAcrossCallsAndPolicies) {
  auto cfg_a = basic_config(PolicyKind::sPOT(), 50, 2, 77);
  auto cfg_b = basic_config(PolicyKind::dPOT(), 50, 2, 77);
  for (int t = 0; t < 2; ++t) {
    auto [la, ua] = make_trial_inputs(cfg_a, t);
    auto [lb, ub] = make_trial_inputs(cfg_b, t);
    ASSERT_EQ(ua.size(), ub.size());
    for (std::size_t i = 0; i < ua.size(); ++i) {
      EXPECT_EQ(ua[i].x, ub[i].x);
      EXPECT_EQ(ua[i].y, ub[i].y);
    }
    for (int s = 0; s < la.size(); ++s) {
      EXPECT_EQ(la.points()[static_cast<std::size_t>(s)].x,
                lb.points()[static_cast<std::size_t>(s)].x);
    }
  }
}

TEST(Tradeoff, EmitsSixConservedRows) {
  auto report = run_tradeoff_suite(100, 50, 3);
  ASSERT_EQ(report.rows.size(), 6u);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(row.loads_conserved) << row.policy.name();
    EXPECT_EQ(row.trial_records.size(), 50u);
  }
  // k for the k-sPOT row follows ceil(ln n).
  EXPECT_EQ(report.row(PolicyKind::kSPOT(5)).policy.k, 5);
}

TEST(Tradeoff, DeterministicCsvBodies) {
  auto a = run_tradeoff_suite(64, 5, 11);
  auto b = run_tradeoff_suite(64, 5, 11);
  std::ostringstream sa, sb;
  auto ra = summary_rows(a);
  auto rb = summary_rows(b);
  write_summary_csv(sa, ra);
  write_summary_csv(sb, rb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_NE(sa.str().find("policy,n,trials,mean_max_load"), std::string::npos);
}

TEST(DistributionStudy, HistogramsNormalize) {
  auto study = run_distribution_study(1000, 7);
  ASSERT_EQ(study.rows.size(), 3u);
  for (const auto& row : study.rows) {
    std::uint64_t servers = 0;
    for (auto c : row.load_hist) servers += c;
    EXPECT_EQ(servers, 1000u);
    EXPECT_EQ(row.dist_hist.total, 1000u);
    std::uint64_t probes = 0;
    for (auto c : row.dist_hist.counts) probes += c;
    EXPECT_EQ(probes, 1000u);
  }
}

TEST(TotalVariation, KnownValues) {
  std::vector<std::uint64_t> a{10, 10};
  std::vector<std::uint64_t> b{10, 10};
  EXPECT_EQ(total_variation(a, b), 0.0);
  std::vector<std::uint64_t> c{20, 0};
  std::vector<std::uint64_t> d{0, 20};
  EXPECT_EQ(total_variation(c, d), 1.0);
  std::vector<std::uint64_t> e{1, 1, 0};
  std::vector<std::uint64_t> f{1, 1};
  EXPECT_EQ(total_variation(e, f), 0.0);
}

TEST(Sweep, SingleNValueIsInsufficientForTrends) {
  const int ns[] = {100};
  const SweepPolicy policies[] = {SweepPolicy::fixed(PolicyKind::sPOT())};
  auto report = run_scaling_sweep(ns, 3, policies, 1);
  EXPECT_EQ(report.trends[0].r1_trend, Trend::insufficient);
  EXPECT_EQ(report.trends[0].r2_trend, Trend::insufficient);
}

TEST(Sweep, OversizedFixedKGetsWarningRow) {
  const int ns[] = {16, 64};
  auto report = run_conjecture_probe(ns, 40, 2, 5);
  EXPECT_TRUE(report.sweep.cell("kspot40", 16).skipped);
  EXPECT_FALSE(report.sweep.cell("kspot40", 64).skipped);
  EXPECT_EQ(report.r2_trend, Trend::insufficient);
  std::ostringstream os;
  write_trend_verdicts(os, report.sweep);
  EXPECT_NE(os.str().find("warning"), std::string::npos);
}

TEST(Sweep, ValidatesInputs) {
  const SweepPolicy policies[] = {SweepPolicy::fixed(PolicyKind::POT())};
  const int bad_order[] = {400, 100};
  EXPECT_THROW(run_scaling_sweep(bad_order, 2, policies, 1), std::invalid_argument);
  const int too_small[] = {8, 100};
  EXPECT_THROW(run_scaling_sweep(too_small, 2, policies, 1), std::invalid_argument);
  const int ok[] = {100};
  EXPECT_THROW(run_scaling_sweep(ok, 0, policies, 1), std::invalid_argument);
}

TEST(Sweep, TrendMachinery) {
  const double inc[] = {1.0, 2.0, 3.0};
  const double dec[] = {3.0, 2.0, 1.0};
  const double mixed[] = {1.0, 3.0, 2.0};
  EXPECT_EQ(strict_trend(inc), Trend::increasing);
  EXPECT_EQ(strict_trend(dec), Trend::decreasing);
  EXPECT_EQ(strict_trend(mixed), Trend::mixed);
  EXPECT_EQ(spearman_against_index(inc), 1.0);
  EXPECT_EQ(spearman_against_index(dec), -1.0);
}

TEST(Sweep, KspotTwoIsStatisticallySpot) {
  // Paired difference of max loads between k-sPOT(2) and sPOT: the candidate
  // sets coincide, so the mean difference CI must straddle zero.
  const int n = 256;
  const int trials = 40;
  ScenarioConfig base = basic_config(PolicyKind::sPOT(), n, trials, 33);
  std::vector<double> diffs;
  for (int t = 0; t < trials; ++t) {
    auto [layout, users] = make_trial_inputs(base, t);
    const auto seed = trial_alloc_seed(base, t);
    const auto spot = allocate(layout, users, PolicyKind::sPOT(), seed);
    const auto kspot2 = allocate(layout, users, PolicyKind::kSPOT(2), seed + 1);
    diffs.push_back(static_cast<double>(spot.max_load()) -
                    static_cast<double>(kspot2.max_load()));
  }
  const Aggregate agg = Aggregate::of(diffs);
  EXPECT_LE(agg.ci_low, 0.0);
  EXPECT_GE(agg.ci_high, 0.0);
}

TEST(Mobility, ReflectFoldsIntoUnitInterval) {
  EXPECT_DOUBLE_EQ(detail::reflect01(1.05), 0.95);
  EXPECT_DOUBLE_EQ(detail::reflect01(-0.2), 0.2);
  EXPECT_DOUBLE_EQ(detail::reflect01(2.3), 0.3);
  EXPECT_DOUBLE_EQ(detail::reflect01(-1.1), 0.9);
  EXPECT_DOUBLE_EQ(detail::reflect01(0.4), 0.4);
}

TEST(Mobility, ZeroVelocityNeverMoves) {
  MobilityConfig cfg;
  cfg.v_max = 0.0;
  Rng rng(4);
  const Point p{0.3, 0.8};
  for (double duration : {0.0, 1.0, 50.0, 1e6}) {
    const Point q = evolve_position(p, cfg, duration, rng);
    EXPECT_EQ(q.x, p.x);
    EXPECT_EQ(q.y, p.y);
  }
}

TEST(Mobility, PositionsStayInClosedUnitSquare) {
  Rng rng(6);
  for (int i = 0; i < 200000; ++i) {
    MobilityConfig cfg;
    cfg.model = (i % 2 == 0) ? MobilityModel::random_direction_reflect
                             : MobilityModel::random_waypoint;
    cfg.v_max = 0.01 + rng.uniform01();
    Point p{rng.uniform01(), rng.uniform01()};
    const double duration = rng.uniform01() * 50.0;
    const Point q = evolve_position(p, cfg, duration, rng);
    ASSERT_GE(q.x, 0.0);
    ASSERT_LE(q.x, 1.0);
    ASSERT_GE(q.y, 0.0);
    ASSERT_LE(q.y, 1.0);
  }
}

TEST(Mobility, WaypointCoversLongDurations) {
  MobilityConfig cfg;
  cfg.model = MobilityModel::random_waypoint;
  cfg.v_max = 0.1;
  Rng rng(8);
  Point p{0.1, 0.1};
  const Point q = evolve_position(p, cfg, 500.0, rng);
  EXPECT_TRUE(q.x >= 0.0 && q.x <= 1.0 && q.y >= 0.0 && q.y <= 1.0);
  EXPECT_TRUE(q.x != p.x || q.y != p.y);
}

TEST(MobilityStudy, EmptyVelocityListGivesEmptyReport) {
  auto report = run_mobility_study(64, 10, {}, 1);
  EXPECT_TRUE(report.rows.empty());
}

TEST(MobilityStudy, ZeroVelocityMatchesStaticScenarioExactly) {
  ScenarioConfig moving = basic_config(PolicyKind::sPOT(), 64, 20, 5);
  moving.mobility = MobilityConfig{};
  moving.mobility->v_max = 0.0;
  ScenarioConfig still = basic_config(PolicyKind::sPOT(), 64, 20, 5);

  auto a = run_scenario(moving);
  auto b = run_scenario(still);
  std::ostringstream sa, sb;
  auto ra = summary_rows(moving, a);
  auto rb = summary_rows(still, b);
  write_summary_csv(sa, ra);
  write_summary_csv(sb, rb);
  EXPECT_EQ(sa.str(), sb.str());
  for (std::size_t t = 0; t < a.trial_records.size(); ++t) {
    EXPECT_EQ(a.trial_records[t].max_load, b.trial_records[t].max_load);
    EXPECT_EQ(a.trial_records[t].mean_distance, b.trial_records[t].mean_distance);
  }
}

TEST(ExperimentCsv, SweepAndMobilityWriters) {
  const int ns[] = {100, 400};
  const SweepPolicy policies[] = {SweepPolicy::fixed(PolicyKind::POT()),
                                  SweepPolicy::kspot_log_n()};
  auto sweep = run_scaling_sweep(ns, 2, policies, 9);
  std::ostringstream os;
  write_sweep_csv(os, sweep);
  EXPECT_EQ(os.str().substr(0, 33), "n,policy,mean_max_load,se,r1,r2\n1");

  const double velocities[] = {0.0, 0.1};
  auto mob = run_mobility_study(64, 5, velocities, 3);
  std::ostringstream ms;
  write_mobility_summary_csv(ms, mob);
  EXPECT_EQ(ms.str().substr(0, 46), "velocity,n,trials,mean_max_load,ci_low,ci_high");
}
