#include "byztree/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "byztree/rng.hpp"

namespace byztree {

namespace {

const Rational kOne(1);

void check_inputs(const TreeTopology& topology, const AttackPlacement& placement,
                  const FlipStrategy& strategy, const std::vector<OperatingPoint>& points,
                  const char* what) {
  if (placement.depth() != topology.depth() || strategy.depth() != topology.depth() ||
      static_cast<int>(points.size()) != topology.depth()) {
    throw std::invalid_argument(std::string(what) + ": depth mismatch between inputs");
  }
}

double weighted_sum(const FusionWeights& weights, const std::vector<long long>& ones,
                    const std::vector<long long>& sizes) {
  double stat = 0.0;
  for (std::size_t k = 0; k < ones.size(); ++k) {
    const auto [a1, a0] = weights.level_weights[k];
    const long long s = ones[k];
    const long long z = sizes[k] - s;
    // skip zero-count sides so infinite weights do not produce 0 * inf
    if (s > 0) stat += a1 * static_cast<double>(s);
    if (z > 0) stat += a0 * static_cast<double>(z);
  }
  return stat;
}

}  // namespace

FusionWeights fusion_detector_weights(const TreeTopology& topology, const AttackConfig& assumed,
                                      const FlipStrategy& assumed_strategy,
                                      const std::vector<OperatingPoint>& points) {
  if (assumed.depth() != topology.depth() || assumed_strategy.depth() != topology.depth() ||
      static_cast<int>(points.size()) != topology.depth()) {
    throw std::invalid_argument("fusion_detector_weights: depth mismatch between inputs");
  }
  FusionWeights weights;
  for (int k = 1; k <= topology.depth(); ++k) {
    if (blinding_mass(assumed, assumed_strategy, k) == kOne) {
      weights.level_weights.emplace_back(0.0, 0.0);  // blinded level is discarded
    } else {
      weights.level_weights.push_back(
          fusion_weights(level_channel(assumed, assumed_strategy, points[k - 1], k)));
    }
  }
  return weights;
}

TrialRecord run_trial(const TreeTopology& topology, const AttackPlacement& placement,
                      const FlipStrategy& strategy, const std::vector<OperatingPoint>& points,
                      const FusionWeights& weights, int hypothesis, std::uint64_t seed,
                      double log_threshold) {
  check_inputs(topology, placement, strategy, points, "run_trial");
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("run_trial: hypothesis must be 0 or 1");
  }
  if (weights.level_weights.size() != static_cast<std::size_t>(topology.depth())) {
    throw std::invalid_argument("run_trial: weights depth mismatch");
  }
  const int depth = topology.depth();
  std::vector<double> p10(depth), p01(depth);
  for (int k = 0; k < depth; ++k) {
    p10[k] = strategy.p10(k + 1).to_double();
    p01[k] = strategy.p01(k + 1).to_double();
  }
  Rng rng(seed);
  TrialRecord record;
  record.hypothesis = hypothesis;
  record.ones.assign(depth, 0);
  for (int k = 0; k < depth; ++k) {
    const OperatingPoint& op = points[k];
    const double p_one = hypothesis == 1 ? op.p_detect : op.p_false_alarm;
    const long long nk = topology.level_size(k + 1);
    for (long long i = 0; i < nk; ++i) {
      bool bit = rng.bernoulli(p_one);
      const int src = placement.byzantine_level_on_path(k + 1, i);
      if (src != 0) {
        // the unique Byzantine on the path flips with its own level's strategy
        bit = bit ? rng.bernoulli(1.0 - p01[src - 1]) : rng.bernoulli(p10[src - 1]);
      }
      if (bit) ++record.ones[k];
    }
  }
  record.statistic = weighted_sum(weights, record.ones, topology.level_sizes());
  record.decide_h1 = record.statistic > log_threshold;
  return record;
}

TrialRecord run_trial(const TreeTopology& topology, const AttackPlacement& placement,
                      const FlipStrategy& strategy, const std::vector<OperatingPoint>& points,
                      int hypothesis, std::uint64_t seed, double log_threshold) {
  const FusionWeights weights =
      fusion_detector_weights(topology, placement.config(topology), strategy, points);
  return run_trial(topology, placement, strategy, points, weights, hypothesis, seed, log_threshold);
}

Calibration calibrate_threshold(const TreeTopology& topology, const AttackPlacement& placement,
                                const FlipStrategy& strategy,
                                const std::vector<OperatingPoint>& points,
                                const FusionWeights& weights, double delta, long long trials,
                                std::uint64_t seed, int replication) {
  check_inputs(topology, placement, strategy, points, "calibrate_threshold");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("calibrate_threshold: delta must lie in (0, 1]");
  }
  if (trials < 1) throw std::invalid_argument("calibrate_threshold: trials must be >= 1");
  if (replication < 1) throw std::invalid_argument("calibrate_threshold: replication must be >= 1");
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(trials));
  for (long long trial = 0; trial < trials; ++trial) {
    double stat = 0.0;
    for (int copy = 0; copy < replication; ++copy) {
      const std::uint64_t s = derive_seed(
          seed, 0xca11b7ULL, static_cast<std::uint64_t>(trial) * replication + copy);
      stat += run_trial(topology, placement, strategy, points, weights, 0, s).statistic;
    }
    stats.push_back(stat);
  }
  std::sort(stats.begin(), stats.end());
  Calibration cal;
  cal.degenerate = stats.front() == stats.back();
  cal.enough_samples = delta * static_cast<double>(trials) >= 100.0;
  long long idx = static_cast<long long>(std::ceil((1.0 - delta) * static_cast<double>(trials))) - 1;
  if (idx < 0) idx = 0;
  if (idx >= trials) idx = trials - 1;
  cal.threshold = stats[static_cast<std::size_t>(idx)];
  return cal;
}

FusionReport run_fusion_experiment(const TreeTopology& topology, const AttackPlacement& placement,
                                   const FlipStrategy& strategy,
                                   const std::vector<OperatingPoint>& points, double delta,
                                   long long trials, std::uint64_t seed, int replication,
                                   const AttackConfig* assumed) {
  check_inputs(topology, placement, strategy, points, "run_fusion_experiment");
  const AttackConfig true_config = placement.config(topology);
  const AttackConfig& weight_config = assumed ? *assumed : true_config;
  const FusionWeights weights =
      fusion_detector_weights(topology, weight_config, strategy, points);

  const Calibration cal = calibrate_threshold(topology, placement, strategy, points, weights,
                                              delta, trials, seed, replication);

  FusionReport report;
  report.threshold = cal.threshold;
  report.degenerate = cal.degenerate;
  report.enough_calibration_samples = cal.enough_samples;
  report.trials = trials;
  report.replication = replication;

  const int depth = topology.depth();
  std::vector<long long> ones_h0(depth, 0), ones_h1(depth, 0);
  long long alarms = 0, misses = 0;
  for (long long trial = 0; trial < trials; ++trial) {
    double stat0 = 0.0, stat1 = 0.0;
    for (int copy = 0; copy < replication; ++copy) {
      const std::uint64_t idx = static_cast<std::uint64_t>(trial) * replication + copy;
      const TrialRecord r0 = run_trial(topology, placement, strategy, points, weights, 0,
                                       derive_seed(seed, 0xf0ULL, idx), cal.threshold);
      const TrialRecord r1 = run_trial(topology, placement, strategy, points, weights, 1,
                                       derive_seed(seed, 0xf1ULL, idx), cal.threshold);
      stat0 += r0.statistic;
      stat1 += r1.statistic;
      for (int k = 0; k < depth; ++k) {
        ones_h0[k] += r0.ones[k];
        ones_h1[k] += r1.ones[k];
      }
    }
    if (stat0 > cal.threshold) ++alarms;
    if (stat1 <= cal.threshold) ++misses;
  }
  const double n = static_cast<double>(trials);
  report.p_f_hat = static_cast<double>(alarms) / n;
  report.p_f_se = std::sqrt(report.p_f_hat * (1.0 - report.p_f_hat) / n);
  report.p_m_hat = static_cast<double>(misses) / n;
  report.p_m_se = std::sqrt(report.p_m_hat * (1.0 - report.p_m_hat) / n);

  for (int k = 0; k < depth; ++k) {
    LevelRateCheck rate;
    rate.level = k + 1;
    rate.bits = topology.level_size(k + 1) * trials * replication;
    rate.rate_h0 = static_cast<double>(ones_h0[k]) / static_cast<double>(rate.bits);
    rate.rate_h1 = static_cast<double>(ones_h1[k]) / static_cast<double>(rate.bits);
    const LevelChannel ch = level_channel(true_config, strategy, points[k], k + 1);
    rate.pi10 = ch.pi10;
    rate.pi11 = ch.pi11;
    report.rates.push_back(rate);
  }
  return report;
}

}  // namespace byztree
