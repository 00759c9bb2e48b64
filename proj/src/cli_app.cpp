#include "byztree/cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>

#include <CLI11.hpp>

#include "byztree/csv.hpp"
#include "byztree/divergence.hpp"
#include "byztree/experiment_config.hpp"
#include "byztree/fusion.hpp"
#include "byztree/identification.hpp"
#include "byztree/stackelberg.hpp"

namespace byztree {

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<long long> seed;
  std::optional<long long> trials;
  std::optional<int> grid;
};

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = ExperimentConfig::load(opts.config_path);
  if (opts.seed) {
    if (*opts.seed < 0) throw ConfigError("--seed must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(*opts.seed);
  }
  if (opts.trials) {
    if (*opts.trials < 1) throw ConfigError("--trials must be >= 1");
    cfg.trials = *opts.trials;
  }
  if (opts.grid) {
    if (*opts.grid < 2) throw ConfigError("--grid must be >= 2");
    if (cfg.surface) cfg.surface->grid = *opts.grid;
  }
  return cfg;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return (std::filesystem::path(opts.out_dir) / name).string();
}

OperatingPoint single_point(const ExperimentConfig& cfg, const std::string& who) {
  if (cfg.points.empty()) throw ConfigError(who + " requires operating_point");
  return cfg.points.front();
}

int cmd_attack_surface(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.surface) throw ConfigError("attack-surface requires a surface section");
  const OperatingPoint op = single_point(cfg, "attack-surface");
  const SurfaceSpec& spec = *cfg.surface;
  CsvWriter csv(out_path(opts, "attack_surface.csv"), {"p10", "p01", "d_k"});
  for (int i = 0; i < spec.grid; ++i) {
    const double p10 = static_cast<double>(i) / (spec.grid - 1);
    for (int j = 0; j < spec.grid; ++j) {
      const double p01 = static_cast<double>(j) / (spec.grid - 1);
      const double dk = level_kld(channel_from_coverage(spec.coverage, p10, p01, op));
      csv.row({CsvWriter::cell(p10), CsvWriter::cell(p01), CsvWriter::cell(dk)});
    }
  }
  std::cout << "attack-surface: " << spec.grid << "x" << spec.grid << " grid at coverage "
            << spec.coverage << " written\n";
  return kExitOk;
}

int cmd_coverage_curve(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.curve) throw ConfigError("coverage-curve requires a coverage_curve section");
  const OperatingPoint op = single_point(cfg, "coverage-curve");
  const CurveSpec& spec = *cfg.curve;
  std::vector<double> grid;
  for (double t = spec.start; t <= spec.stop + 1e-12; t += spec.step) grid.push_back(t);
  const auto curve = kld_vs_coverage(op, grid);

  bool decreasing = true;
  double min_second_diff = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (!(curve[i].second < curve[i - 1].second)) decreasing = false;
    if (i + 1 < curve.size()) {
      const double dd = curve[i + 1].second - 2.0 * curve[i].second + curve[i - 1].second;
      min_second_diff = std::min(min_second_diff, dd);
    }
  }
  CsvWriter csv(out_path(opts, "coverage_curve.csv"),
                {"row", "t", "min_d_k", "strictly_decreasing", "min_second_difference"});
  for (const auto& [t, dk] : curve) {
    csv.row({"data", CsvWriter::cell(t), CsvWriter::cell(dk), "", ""});
  }
  csv.row({"summary", "", "", decreasing ? "1" : "0", CsvWriter::cell(min_second_diff)});
  std::cout << "coverage-curve: " << curve.size() << " points, strictly_decreasing="
            << (decreasing ? 1 : 0) << " min_second_difference=" << min_second_diff << "\n";
  return kExitOk;
}

int cmd_stackelberg(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.game) throw ConfigError("stackelberg requires a game section");
  const TreeTopology& topo = cfg.require_topology("stackelberg");
  const auto points = cfg.require_points("stackelberg");
  const GameSpec& game = *cfg.game;
  const CostSet costs(game.costs);
  const Budgets budgets{game.network_budget, game.attacker_budget};

  const auto solution = solve_bilevel(costs, topo, points, budgets);
  if (!solution) {
    std::cout << "stackelberg: infeasible (network budget excludes every cost subset)\n";
    return kExitInfeasibleGame;
  }
  {
    CsvWriter csv(out_path(opts, "stackelberg_solution.csv"),
                  {"level", "allocated_cost", "byzantines", "defender_kld", "baseline_kld",
                   "attacker_profit", "blinding_flagged"});
    for (int k = 0; k < topo.depth(); ++k) {
      csv.row({CsvWriter::cell(k + 1), solution->allocated_costs[k].str(),
               CsvWriter::cell(solution->attack[k]), CsvWriter::cell(solution->defender_kld),
               CsvWriter::cell(solution->baseline_kld), CsvWriter::cell(solution->attacker_profit),
               solution->blinding_flagged ? "1" : "0"});
    }
  }
  if (game.payoff_table) {
    std::vector<std::string> header;
    for (int k = 1; k <= topo.depth(); ++k) header.push_back("b" + std::to_string(k));
    header.push_back("feasible");
    header.push_back("min_kld");
    CsvWriter csv(out_path(opts, "stackelberg_payoffs.csv"), header);
    for (const PayoffRow& row : attack_payoff_table(solution->allocated_costs, topo, points,
                                                    game.attacker_budget, game.enumeration_limit)) {
      std::vector<std::string> cells;
      for (long long b : row.attack) cells.push_back(CsvWriter::cell(b));
      cells.push_back(row.feasible ? "1" : "0");
      cells.push_back(CsvWriter::cell(row.kld));
      csv.row(cells);
    }
  }
  std::cout << "stackelberg: allocated (";
  for (int k = 0; k < topo.depth(); ++k) {
    std::cout << (k ? ", " : "") << solution->allocated_costs[k];
  }
  std::cout << "), attack (";
  for (int k = 0; k < topo.depth(); ++k) std::cout << (k ? ", " : "") << solution->attack[k];
  std::cout << "), defender KLD " << format_double(solution->defender_kld);
  if (solution->blinding_flagged) std::cout << " [warning: attacker reaches the blinding region]";
  std::cout << "\n";
  return kExitOk;
}

int cmd_identify(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.identification) throw ConfigError("identify requires an identification section");
  const TreeTopology& topo = cfg.require_topology("identify");
  const AttackSpec& attack = cfg.require_attack("identify");
  const AttackConfig config(topo, attack.counts);
  const AttackPlacement placement = sample_placement(topo, config, attack.placement_seed);
  IdentificationSpec spec = *cfg.identification;

  CsvWriter csv(out_path(opts, "identify.csv"),
                {"T", "level", "p_iso_exact", "p_iso_normal", "p_iso_mc", "ci_halfwidth",
                 "asymptotic_bound"});
  for (int window : spec.windows) {
    spec.params.window = window;
    const std::vector<double> etas = compute_thresholds(spec.params);
    const IsolationReport report =
        simulate_identification(topo, placement, spec.params, cfg.trials, cfg.seed);
    if (!normal_approximation_in_range(spec.params)) {
      std::cout << "identify: note, T=" << window
                << " is outside the T*p*(1-p) >= 9 normal-approximation regime\n";
    }
    for (int k = 1; k <= topo.depth(); ++k) {
      const IsolationLevelStats& s = report.levels[k - 1];
      const bool has_byz = s.byz_observations > 0;
      csv.row({CsvWriter::cell(window), CsvWriter::cell(k),
               CsvWriter::cell(p_iso_exact(spec.params, etas, k)),
               CsvWriter::cell(p_iso_normal(spec.params, etas, k)),
               has_byz ? CsvWriter::cell(s.byz_rate) : "",
               has_byz ? CsvWriter::cell(1.96 * s.byz_se) : "",
               CsvWriter::cell(asymptotic_lower_bound(spec.params.deltas, k))});
    }
  }
  std::cout << "identify: " << spec.windows.size() << " window(s) x " << topo.depth()
            << " level(s) written\n";
  return kExitOk;
}

int cmd_fuse(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  if (!cfg.fusion) throw ConfigError("fuse requires a fusion section");
  const TreeTopology& topo = cfg.require_topology("fuse");
  const AttackSpec& attack = cfg.require_attack("fuse");
  const auto points = cfg.require_points("fuse");
  const AttackConfig config(topo, attack.counts);
  const AttackPlacement placement = sample_placement(topo, config, attack.placement_seed);
  const FlipStrategy strategy = cfg.resolve_strategy(topo, config);
  const FusionSpec& spec = *cfg.fusion;

  const FusionReport report =
      run_fusion_experiment(topo, placement, strategy, points, spec.delta, cfg.trials, cfg.seed);
  if (!report.enough_calibration_samples) {
    std::cout << "fuse: note, delta*trials < 100; the calibrated threshold is noisy\n";
  }
  {
    CsvWriter csv(out_path(opts, "fusion.csv"),
                  {"delta", "trials", "replication", "threshold", "degenerate", "p_f_hat", "p_f_se",
                   "p_m_hat", "p_m_se"});
    csv.row({CsvWriter::cell(spec.delta), CsvWriter::cell(report.trials),
             CsvWriter::cell(report.replication), CsvWriter::cell(report.threshold),
             report.degenerate ? "1" : "0", CsvWriter::cell(report.p_f_hat),
             CsvWriter::cell(report.p_f_se), CsvWriter::cell(report.p_m_hat),
             CsvWriter::cell(report.p_m_se)});
  }
  {
    CsvWriter csv(out_path(opts, "fusion_rates.csv"),
                  {"level", "bits", "rate_h0", "pi10", "rate_h1", "pi11"});
    for (const LevelRateCheck& r : report.rates) {
      csv.row({CsvWriter::cell(r.level), CsvWriter::cell(r.bits), CsvWriter::cell(r.rate_h0),
               CsvWriter::cell(r.pi10), CsvWriter::cell(r.rate_h1), CsvWriter::cell(r.pi11)});
    }
  }
  if (!spec.replications.empty()) {
    const double base_kld = total_kld(topo, config, strategy, points).total;
    CsvWriter csv(out_path(opts, "fusion_replication.csv"),
                  {"m", "threshold", "p_m_hat", "p_m_se", "minus_ln_pm"});
    std::vector<double> xs, ys;
    for (int m : spec.replications) {
      const FusionReport r = run_fusion_experiment(topo, placement, strategy, points, spec.delta,
                                                   cfg.trials, cfg.seed, m);
      const double lnpm = r.p_m_hat > 0.0 ? -std::log(r.p_m_hat)
                                          : std::numeric_limits<double>::infinity();
      csv.row({CsvWriter::cell(m), CsvWriter::cell(r.threshold), CsvWriter::cell(r.p_m_hat),
               CsvWriter::cell(r.p_m_se), CsvWriter::cell(lnpm)});
      if (r.p_m_hat > 0.0) {
        xs.push_back(m);
        ys.push_back(lnpm);
      }
    }
    double slope = std::numeric_limits<double>::quiet_NaN();
    if (xs.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= xs.size();
      my /= ys.size();
      double num = 0, den = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
      }
      slope = num / den;
    }
    CsvWriter summary(out_path(opts, "fusion_slope.csv"), {"slope", "base_kld", "ratio"});
    summary.row({CsvWriter::cell(slope), CsvWriter::cell(base_kld),
                 CsvWriter::cell(slope / base_kld)});
    std::cout << "fuse: replication slope " << format_double(slope) << " vs base KLD "
              << format_double(base_kld) << "\n";
  }
  std::cout << "fuse: P_F_hat=" << format_double(report.p_f_hat)
            << " P_M_hat=" << format_double(report.p_m_hat) << " threshold="
            << format_double(report.threshold) << (report.degenerate ? " [degenerate]" : "")
            << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Distributed detection in regular tree networks under Byzantine data falsification"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "experiment configuration (JSON)")->required();
    sub->add_option("--out", opts.out_dir, "output directory for CSV files");
    sub->add_option("--seed", opts.seed, "override the master seed");
    sub->add_option("--trials", opts.trials, "override the Monte Carlo trial count");
    sub->add_option("--grid", opts.grid, "override the strategy grid resolution");
  };

  int (*handler)(const CommonOpts&) = nullptr;
  auto* surface = app.add_subcommand("attack-surface", "KLD over the flip-probability grid");
  auto* curve = app.add_subcommand("coverage-curve", "min KLD versus Byzantine coverage");
  auto* game = app.add_subcommand("stackelberg", "solve the defender/attacker resource game");
  auto* identify = app.add_subcommand("identify", "reputation-based Byzantine identification");
  auto* fuse = app.add_subcommand("fuse", "Monte Carlo decision-fusion experiment");
  for (auto* sub : {surface, curve, game, identify, fuse}) add_common(sub);
  surface->callback([&] { handler = cmd_attack_surface; });
  curve->callback([&] { handler = cmd_coverage_curve; });
  game->callback([&] { handler = cmd_stackelberg; });
  identify->callback([&] { handler = cmd_identify; });
  fuse->callback([&] { handler = cmd_fuse; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    return handler(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const approximation_domain_error& e) {
    std::cerr << "approximation domain error: " << e.what() << "\n";
    return kExitApproximationDomain;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace byztree
