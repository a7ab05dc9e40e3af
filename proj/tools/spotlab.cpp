// spotlab: verification checks and experiment drivers for spatially aware
// power-of-two-choices allocation on the unit square.
//
// Exit codes: 0 pass/success, 1 statistical check failed, 2 usage or config
// error.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spotlab/bins.hpp"
#include "spotlab/config.hpp"
#include "spotlab/csv.hpp"
#include "spotlab/delaunay.hpp"
#include "spotlab/experiment.hpp"
#include "spotlab/geom.hpp"
#include "spotlab/manifest.hpp"
#include "spotlab/policy.hpp"
#include "spotlab/tess.hpp"

namespace fs = std::filesystem;
using namespace spotlab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitStatFail = 1;
constexpr int kExitUsage = 2;

// Desk-scale guard rails; full-figure runs need an explicit opt-in.
constexpr int kDeskMaxSweepN = 25600;
constexpr int kDeskMaxSweepTrials = 50;

struct OutputSink {
  fs::path dir;
  RunManifest manifest;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  explicit OutputSink(fs::path d) : dir(std::move(d)) {
    fs::create_directories(dir);
    manifest.timestamp = RunManifest::now_iso8601();
  }

  std::ofstream open(const std::string& name) {
    manifest.outputs.push_back(name);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  }

  void finish() {
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream out(dir / "manifest.json");
    write_manifest_json(out, manifest);
  }
};

std::string default_out_dir(const std::string& kind, std::uint64_t seed) {
  return "runs/" + kind + "-seed" + std::to_string(seed) + "-" + RunManifest::now_iso8601();
}

// ---------------------------------------------------------------------------
// verify targets

struct VerifyOptions {
  int side = 8;
  int n = 64;
  std::uint64_t probes = 1000000;
  std::uint64_t seed = 1;
  int seeds = 5;
  int balls = 16;
  std::uint64_t trials = 100000;
  int vectors = 20;
  std::string out;
  int threads = 1;
};

int verify_grid_regularity(const VerifyOptions& opt) {
  const auto graph = build_grid_delaunay(opt.side);
  const int n = opt.side * opt.side;
  bool degrees_ok = true;
  for (int v = 0; v < n; ++v) degrees_ok = degrees_ok && graph.degree(v) == 4;
  const bool edges_ok = graph.edge_count() == static_cast<std::size_t>(2 * n);
  const bool pass = degrees_ok && edges_ok;

  const std::string out = opt.out.empty() ? "grid_regularity_edges.txt" : opt.out;
  std::ofstream report(out);
  write_edge_list(report, graph);
  std::cout << "grid-regularity: side=" << opt.side << " n=" << n
            << " edges=" << graph.edge_count() << " expected_edges=" << 2 * n
            << " all_degree_4=" << (degrees_ok ? "yes" : "no") << " -> "
            << (pass ? "PASS" : "FAIL") << "\n"
            << "report: " << out << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int verify_grid_edge_uniformity(const VerifyOptions& opt) {
  const auto layout = make_grid_layout(opt.side);
  const auto graph = build_grid_delaunay(opt.side);
  const auto est = estimate_edge_probabilities(layout, graph, opt.probes, opt.seed, opt.threads);

  const double target = 1.0 / static_cast<double>(graph.edge_count());
  double max_rel = 0.0;
  for (const auto& [u, v] : graph.edges()) {
    max_rel = std::max(max_rel, std::fabs(est.probability({u, v}) - target) / target);
  }
  const bool pass = est.non_edge_hits == 0 && max_rel < 0.05;

  const std::string out = opt.out.empty() ? "grid_edge_probabilities.csv" : opt.out;
  std::ofstream report(out);
  write_pair_counts_csv(report, est);
  std::cout << "grid-lemma1: side=" << opt.side << " probes=" << opt.probes
            << " non_edge_mass=" << csv_num(est.non_edge_mass())
            << " max_rel_dev=" << csv_num(max_rel) << " threshold=0.05 -> "
            << (pass ? "PASS" : "FAIL") << "\n"
            << "report: " << out << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int verify_second_order_cells(const VerifyOptions& opt) {
  const std::string out = opt.out.empty() ? "second_order_cells.csv" : opt.out;
  std::ofstream report(out);
  report << "seed_index,n,distinct_pairs,bound,pairs_subset_of_edges\n";
  bool pass = true;
  for (int s = 0; s < opt.seeds; ++s) {
    const auto layout =
        make_uniform_layout(opt.n, Rng::derive_seed(opt.seed, {tag::layout, static_cast<std::uint64_t>(s)}));
    const auto graph = build_delaunay(layout);
    const auto est = estimate_second_order_cells(
        layout, opt.probes, Rng::derive_seed(opt.seed, {tag::probe, static_cast<std::uint64_t>(s)}),
        opt.threads);
    bool subset = true;
    for (const auto& [key, count] : est.pair_areas) {
      subset = subset && graph.has_edge(key.first, key.second);
    }
    const bool within = est.distinct_pairs() <= static_cast<std::size_t>(3 * opt.n);
    pass = pass && subset && within;
    report << s << ',' << opt.n << ',' << est.distinct_pairs() << ',' << 3 * opt.n << ','
           << (subset ? "yes" : "no") << '\n';
    std::cout << "second-order-cells: seed_index=" << s << " distinct_pairs=" << est.distinct_pairs()
              << " bound=" << 3 * opt.n << " subset_of_delaunay=" << (subset ? "yes" : "no")
              << "\n";
  }
  std::cout << "second-order-cells: " << (pass ? "PASS" : "FAIL") << "\n"
            << "report: " << out << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int verify_conditional_quarter(const VerifyOptions& opt) {
  const auto layout = make_grid_layout(opt.side);
  const auto est = estimate_conditional_second_nearest(layout, opt.probes, opt.seed, opt.threads);
  const int side = opt.side;
  double worst = 0.0;
  for (std::uint32_t s = 0; s < static_cast<std::uint32_t>(side * side); ++s) {
    const auto [gx, gy] = grid_coords(side, s);
    for (std::uint32_t nb : {grid_id(side, (gx + 1) % side, gy),
                             grid_id(side, (gx + side - 1) % side, gy),
                             grid_id(side, gx, (gy + 1) % side),
                             grid_id(side, gx, (gy + side - 1) % side)}) {
      worst = std::max(worst, std::fabs(est.conditional(s, nb) - 0.25));
    }
  }
  const bool pass = worst < 0.01 && est.non_neighbor_hits == 0;

  const std::string out = opt.out.empty() ? "conditional_second_nearest.csv" : opt.out;
  std::ofstream report(out);
  write_conditional_csv(report, est);
  std::cout << "conditional-quarter: side=" << side << " probes=" << opt.probes
            << " worst_abs_dev=" << csv_num(worst) << " threshold=0.01 non_neighbor_hits="
            << est.non_neighbor_hits << " -> " << (pass ? "PASS" : "FAIL") << "\n"
            << "report: " << out << "\n";
  return pass ? kExitPass : kExitStatFail;
}

int verify_schur(const VerifyOptions& opt) {
  const auto uniform = ProbabilityVector::uniform(opt.n);
  const std::string out = opt.out.empty() ? "schur_check.csv" : opt.out;
  std::ofstream report(out);
  report << "vector,mean_p,se_p,mean_uniform,se_uniform,pass\n";
  int failures = 0;
  for (int v = 0; v < opt.vectors; ++v) {
    // Random point on the simplex: normalized exponentials.
    Rng rng = Rng::stream(opt.seed, {tag::oracle, static_cast<std::uint64_t>(v)});
    std::vector<double> w(static_cast<std::size_t>(opt.n));
    for (auto& x : w) x = -std::log(1.0 - rng.uniform01());
    const auto p = ProbabilityVector::normalized(std::move(w));
    const auto verdict = check_schur_monotonicity(
        opt.balls, p, uniform, opt.trials,
        Rng::derive_seed(opt.seed, {tag::trial, static_cast<std::uint64_t>(v)}));
    failures += verdict.pass ? 0 : 1;
    report << v << ',' << csv_num(verdict.p_estimate.mean) << ',' << csv_num(verdict.p_estimate.se)
           << ',' << csv_num(verdict.q_estimate.mean) << ',' << csv_num(verdict.q_estimate.se)
           << ',' << (verdict.pass ? "yes" : "no") << '\n';
  }
  const int allowed = opt.vectors / 20;  // one-sided statistical allowance
  const bool pass = failures <= allowed;
  std::cout << "schur: bins=" << opt.n << " balls=" << opt.balls << " vectors=" << opt.vectors
            << " trials=" << opt.trials << " failures=" << failures << " allowed=" << allowed
            << " -> " << (pass ? "PASS" : "FAIL") << "\n"
            << "report: " << out << "\n";
  return pass ? kExitPass : kExitStatFail;
}

// ---------------------------------------------------------------------------
// run / sweep

ScenarioConfig scenario_from_config(const KeyValueConfig& cfg) {
  ScenarioConfig sc;
  const std::string placement = cfg.get_string("placement", "uniform");
  if (placement == "grid") {
    sc.placement = ScenarioConfig::Placement::grid;
  } else if (placement == "uniform") {
    sc.placement = ScenarioConfig::Placement::uniform;
  } else {
    throw ConfigError(0, "placement must be `grid` or `uniform`");
  }
  if (cfg.has("side")) {
    const int side = static_cast<int>(cfg.get_int("side"));
    sc.n = side * side;
    sc.placement = ScenarioConfig::Placement::grid;
  } else {
    sc.n = static_cast<int>(cfg.get_int("n"));
  }
  sc.m = static_cast<int>(cfg.get_int("m", 0));
  sc.trials = static_cast<int>(cfg.get_int("trials", 1));
  sc.seed = cfg.get_uint64("seed", 0);

  const std::string policy = cfg.get_string("policy", "spot");
  const int k = static_cast<int>(cfg.get_int("k", default_kspot_k(sc.n)));
  const auto parsed = parse_policy(policy, k);
  if (!parsed) throw ConfigError(0, "unknown policy `" + policy + "`");
  sc.policy = *parsed;

  if (cfg.has("v_max") || cfg.has("mobility_model")) {
    MobilityConfig mob;
    const std::string model = cfg.get_string("mobility_model", "direction_reflect");
    if (model == "waypoint") {
      mob.model = MobilityModel::random_waypoint;
    } else if (model == "direction_reflect") {
      mob.model = MobilityModel::random_direction_reflect;
    } else {
      throw ConfigError(0, "mobility_model must be `waypoint` or `direction_reflect`");
    }
    mob.v_max = cfg.get_double("v_max", 0.1);
    mob.dt = cfg.get_double("dt", 0.01);
    mob.warmup_per_user = cfg.get_double("warmup_per_user", 1.0);
    sc.mobility = mob;
  }
  return sc;
}

void write_trials_csv(std::ostream& os, const std::string& policy,
                      std::span<const TrialRecord> records) {
  for (std::size_t t = 0; t < records.size(); ++t) {
    os << policy << ',' << t << ',' << records[t].max_load << ','
       << csv_num(records[t].mean_distance) << '\n';
  }
}

void write_gnuplot_histograms(OutputSink& sink, const std::vector<std::string>& policies) {
  auto gp = sink.open("plot.gp");
  gp << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set style fill solid 0.4\n"
     << "set terminal pngcairo size 900,600\n"
     << "set output 'load_hist.png'\n"
     << "set xlabel 'load'\nset ylabel 'fraction of servers'\n"
     << "plot ";
  for (std::size_t i = 0; i < policies.size(); ++i) {
    gp << (i ? ", " : "")
       << "'load_hist.csv' using 2:(strcol(1) eq '" << policies[i] << "' ? $4 : NaN) "
       << "with boxes title '" << policies[i] << "'";
  }
  gp << "\nset output 'dist_hist.png'\n"
     << "set xlabel 'request distance'\nset ylabel 'fraction of users'\n"
     << "plot ";
  for (std::size_t i = 0; i < policies.size(); ++i) {
    gp << (i ? ", " : "")
       << "'dist_hist.csv' using 3:(strcol(1) eq '" << policies[i] << "' ? $6 : NaN) "
       << "with boxes title '" << policies[i] << "'";
  }
  gp << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_override, bool gnuplot,
            int threads) {
  (void)threads;
  const KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
  cfg.require_known({"type", "placement", "n", "side", "m", "policy", "k", "trials", "seed",
                     "velocities", "mobility_model", "v_max", "dt", "warmup_per_user", "out"});
  const std::string type = cfg.get_string("type", "scenario");
  const std::uint64_t seed = cfg.get_uint64("seed", 0);

  std::string out_dir = !out_override.empty() ? out_override : cfg.get_string("out", "");
  if (out_dir.empty()) out_dir = default_out_dir(type, seed);
  OutputSink sink{fs::path(out_dir)};
  sink.manifest.command = "run " + type;
  sink.manifest.seed = seed;
  sink.manifest.config_echo = cfg.echo();

  if (type == "scenario") {
    const ScenarioConfig sc = scenario_from_config(cfg);
    sc.validate();
    const ScenarioReport report = run_scenario(sc);
    {
      auto os = sink.open("summary.csv");
      const auto rows = summary_rows(sc, report);
      write_summary_csv(os, rows);
    }
    {
      auto os = sink.open("trials.csv");
      os << "policy,trial,max_load,mean_distance\n";
      write_trials_csv(os, sc.policy.name(), report.trial_records);
    }
    {
      auto os = sink.open("load_hist.csv");
      const LoadHistRow rows[] = {{sc.policy.name(), &report.load_hist}};
      write_load_hist_csv(os, rows);
    }
    {
      auto os = sink.open("dist_hist.csv");
      const DistHistRow rows[] = {{sc.policy.name(), &report.dist_hist}};
      write_dist_hist_csv(os, rows);
    }
    if (gnuplot) write_gnuplot_histograms(sink, {sc.policy.name()});
  } else if (type == "tradeoff") {
    const int n = static_cast<int>(cfg.get_int("n"));
    const int trials = static_cast<int>(cfg.get_int("trials", 10));
    const TradeoffReport report = run_tradeoff_suite(n, trials, seed);
    {
      auto os = sink.open("summary.csv");
      const auto rows = summary_rows(report);
      write_summary_csv(os, rows);
    }
    {
      auto os = sink.open("trials.csv");
      os << "policy,trial,max_load,mean_distance\n";
      for (const auto& row : report.rows) {
        write_trials_csv(os, row.policy.name(), row.trial_records);
      }
    }
    {
      auto os = sink.open("audit.csv");
      os << "policy,loads_conserved\n";
      for (const auto& row : report.rows) {
        os << row.policy.name() << ',' << (row.loads_conserved ? "yes" : "no") << '\n';
      }
    }
    if (gnuplot) {
      auto gp = sink.open("plot.gp");
      gp << "set datafile separator ','\nset terminal pngcairo size 900,600\n"
         << "set style fill solid 0.4\nset boxwidth 0.6\n"
         << "set output 'max_load.png'\nset ylabel 'mean max load'\n"
         << "plot 'summary.csv' every ::1 using 0:4:5:6:xtic(1) with yerrorbars notitle\n"
         << "set output 'distance.png'\nset ylabel 'mean request distance'\nset logscale y\n"
         << "plot 'summary.csv' every ::1 using 0:7:8:9:xtic(1) with yerrorbars notitle\n";
    }
  } else if (type == "distribution") {
    const int n = static_cast<int>(cfg.get_int("n"));
    const DistributionStudy study = run_distribution_study(n, seed);
    std::vector<std::string> names;
    {
      auto os = sink.open("load_hist.csv");
      std::vector<LoadHistRow> rows;
      for (const auto& r : study.rows) rows.push_back({r.policy.name(), &r.load_hist});
      write_load_hist_csv(os, rows);
    }
    {
      auto os = sink.open("dist_hist.csv");
      std::vector<DistHistRow> rows;
      for (const auto& r : study.rows) rows.push_back({r.policy.name(), &r.dist_hist});
      write_dist_hist_csv(os, rows);
    }
    {
      auto os = sink.open("summary.csv");
      std::vector<SummaryRow> rows;
      for (const auto& r : study.rows) {
        Aggregate ml, md;
        ml.mean = ml.ci_low = ml.ci_high = static_cast<double>(r.max_load);
        md.mean = md.ci_low = md.ci_high = r.mean_distance;
        rows.push_back({r.policy.name(), study.n, 1, ml, md});
        names.push_back(r.policy.name());
      }
      write_summary_csv(os, rows);
    }
    if (gnuplot) write_gnuplot_histograms(sink, names);
  } else if (type == "mobility") {
    const int n = static_cast<int>(cfg.get_int("n", 64));
    const int trials = static_cast<int>(cfg.get_int("trials", 1000));
    const auto velocities = cfg.has("velocities") ? cfg.get_double_list("velocities")
                                                  : std::vector<double>{0.01, 0.1};
    MobilityConfig base;
    const std::string model = cfg.get_string("mobility_model", "direction_reflect");
    base.model = model == "waypoint" ? MobilityModel::random_waypoint
                                     : MobilityModel::random_direction_reflect;
    base.dt = cfg.get_double("dt", 0.01);
    base.warmup_per_user = cfg.get_double("warmup_per_user", 1.0);
    const MobilityStudyReport report = run_mobility_study(n, trials, velocities, seed, base);
    auto os = sink.open("mobility_summary.csv");
    write_mobility_summary_csv(os, report);
  } else {
    throw ConfigError(0, "unknown run type `" + type + "`");
  }

  sink.finish();
  std::cout << "outputs written to " << sink.dir.string() << "\n";
  return kExitPass;
}

std::vector<SweepPolicy> parse_sweep_policies(const std::vector<std::string>& tokens) {
  std::vector<SweepPolicy> out;
  for (const auto& t : tokens) {
    if (t == "kspot") {
      out.push_back(SweepPolicy::kspot_log_n());
    } else if (t.rfind("kspot", 0) == 0 && t.size() > 5) {
      out.push_back(SweepPolicy::kspot_fixed(std::stoi(t.substr(5))));
    } else {
      const auto parsed = parse_policy(t, 0);
      if (!parsed) throw ConfigError(0, "unknown sweep policy `" + t + "`");
      out.push_back(SweepPolicy::fixed(*parsed));
    }
  }
  return out;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override, bool gnuplot) {
  const KeyValueConfig cfg = KeyValueConfig::parse_file(config_path);
  cfg.require_known(
      {"type", "n_values", "trials", "policies", "k_fixed", "seed", "out", "allow_full"});
  const std::string type = cfg.get_string("type", "sweep");
  const std::uint64_t seed = cfg.get_uint64("seed", 0);
  const int trials = static_cast<int>(cfg.get_int("trials", 10));
  const auto n_values = cfg.has("n_values") ? cfg.get_int_list("n_values")
                                            : std::vector<int>{100, 400, 1600, 6400, 25600};
  const bool allow_full = cfg.get_string("allow_full", "false") == "true";
  if (!allow_full) {
    for (int n : n_values) {
      if (n > kDeskMaxSweepN) {
        throw ConfigError(0, "n=" + std::to_string(n) +
                                 " exceeds the desk-scale cap; set allow_full = true");
      }
    }
    if (trials > kDeskMaxSweepTrials) {
      throw ConfigError(0, "trials above desk-scale cap; set allow_full = true");
    }
  }
  if (trials < 1) throw ConfigError(0, "trials must be >= 1");

  std::string out_dir = !out_override.empty() ? out_override : cfg.get_string("out", "");
  if (out_dir.empty()) out_dir = default_out_dir(type, seed);
  OutputSink sink{fs::path(out_dir)};
  sink.manifest.command = "sweep " + type;
  sink.manifest.seed = seed;
  sink.manifest.config_echo = cfg.echo();

  SweepReport report;
  std::string extra_verdict;
  if (type == "sweep") {
    const auto tokens = cfg.has("policies")
                            ? cfg.get_list("policies")
                            : std::vector<std::string>{"pot", "spot", "dpot", "kspot"};
    const auto policies = parse_sweep_policies(tokens);
    report = run_scaling_sweep(n_values, trials, policies, seed);
  } else if (type == "conjecture") {
    const int k_fixed = static_cast<int>(cfg.get_int("k_fixed", 4));
    const ConjectureReport probe = run_conjecture_probe(n_values, k_fixed, trials, seed);
    report = probe.sweep;
    extra_verdict = std::string("conjecture: fixed k=") + std::to_string(k_fixed) +
                    " r2_trend=" + trend_name(probe.r2_trend) + " consistent_with_conjecture=" +
                    (probe.consistent_with_conjecture ? "yes" : "no") + "\n";
  } else {
    throw ConfigError(0, "unknown sweep type `" + type + "`");
  }

  {
    auto os = sink.open("growth.csv");
    write_sweep_csv(os, report);
  }
  {
    auto os = sink.open("verdicts.txt");
    write_trend_verdicts(os, report);
    os << extra_verdict;
  }
  if (gnuplot) {
    auto gp = sink.open("plot.gp");
    gp << "set datafile separator ','\nset key autotitle columnhead\nset logscale x\n"
       << "set terminal pngcairo size 900,600\nset output 'growth.png'\n"
       << "set xlabel 'n'\nset ylabel 'mean max load'\nplot ";
    bool first = true;
    std::vector<std::string> labels;
    for (const auto& t : report.trends) labels.push_back(t.policy_label);
    for (const auto& label : labels) {
      gp << (first ? "" : ", ") << "'growth.csv' using 1:(strcol(2) eq '" << label
         << "' ? $3 : NaN) with linespoints title '" << label << "'";
      first = false;
    }
    gp << "\n";
  }
  sink.finish();
  std::ostringstream verdict_echo;
  write_trend_verdicts(verdict_echo, report);
  std::cout << verdict_echo.str() << extra_verdict << "outputs written to " << sink.dir.string()
            << "\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spatial power-of-two-choices allocation laboratory"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for Monte Carlo estimators");

  // verify
  auto* verify = app.add_subcommand("verify", "run a statistical/structural verification target");
  std::string target;
  VerifyOptions vopt;
  verify->add_option("target", target,
                     "one of: grid-lemma1, grid-regularity, second-order-cells, schur, "
                     "conditional-quarter")
      ->required();
  verify->add_option("--side", vopt.side, "grid side length");
  verify->add_option("--n", vopt.n, "server/bin count");
  verify->add_option("--probes", vopt.probes, "Monte Carlo probe users");
  verify->add_option("--seed", vopt.seed, "scenario seed");
  verify->add_option("--seeds", vopt.seeds, "number of layout seeds (second-order-cells)");
  verify->add_option("--balls", vopt.balls, "balls per trial (schur)");
  verify->add_option("--trials", vopt.trials, "Monte Carlo trials (schur)");
  verify->add_option("--vectors", vopt.vectors, "random probability vectors (schur)");
  verify->add_option("--out", vopt.out, "report file path");

  // run
  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  std::string run_config, run_out;
  bool run_gnuplot = false;
  run->add_option("config", run_config, "key = value config file")->required();
  run->add_option("--out", run_out, "output directory (overrides config)");
  run->add_flag("--gnuplot", run_gnuplot, "also emit a gnuplot script");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a scaling sweep described by a config file");
  std::string sweep_config, sweep_out;
  bool sweep_gnuplot = false;
  sweep->add_option("config", sweep_config, "key = value config file")->required();
  sweep->add_option("--out", sweep_out, "output directory (overrides config)");
  sweep->add_flag("--gnuplot", sweep_gnuplot, "also emit a gnuplot script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      vopt.threads = threads;
      if (target == "grid-lemma1") return verify_grid_edge_uniformity(vopt);
      if (target == "grid-regularity") return verify_grid_regularity(vopt);
      if (target == "second-order-cells") return verify_second_order_cells(vopt);
      if (target == "schur") return verify_schur(vopt);
      if (target == "conditional-quarter") return verify_conditional_quarter(vopt);
      std::cerr << "unknown verify target `" << target << "`\n";
      return kExitUsage;
    }
    if (run->parsed()) return cmd_run(run_config, run_out, run_gnuplot, threads);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, sweep_gnuplot);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
