#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "byztree/attack_model.hpp"
#include "byztree/divergence.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Per-level FC weights (a1, a0). Levels whose blinding condition holds exactly
// get (0, 0), matching the rule that blinded levels are discarded.
struct FusionWeights {
  std::vector<std::pair<double, double>> level_weights;
};

FusionWeights fusion_detector_weights(const TreeTopology& topology, const AttackConfig& assumed,
                                      const FlipStrategy& assumed_strategy,
                                      const std::vector<OperatingPoint>& points);

struct TrialRecord {
  int hypothesis = 0;
  std::vector<long long> ones;  // s_k: received ones per origin level
  double statistic = 0.0;       // log-domain weighted sum
  bool decide_h1 = false;
};

// One fused observation round: every node draws its local decision, the unique
// Byzantine on each path flips the relayed bit independently, the FC applies
// the weighted log-likelihood statistic. Zero-count sides are skipped so
// infinite weights from degenerate channels behave.
TrialRecord run_trial(const TreeTopology& topology, const AttackPlacement& placement,
                      const FlipStrategy& strategy, const std::vector<OperatingPoint>& points,
                      const FusionWeights& weights, int hypothesis, std::uint64_t seed,
                      double log_threshold = 0.0);

// Convenience overload: weights derived from the placement's own configuration
// (the FC knows the true beta).
TrialRecord run_trial(const TreeTopology& topology, const AttackPlacement& placement,
                      const FlipStrategy& strategy, const std::vector<OperatingPoint>& points,
                      int hypothesis, std::uint64_t seed, double log_threshold = 0.0);

struct Calibration {
  double threshold = 0.0;
  bool degenerate = false;       // all H0 statistics identical
  bool enough_samples = true;    // delta * trials >= 100
};

// Empirical (1-delta)-quantile of the H0 statistic; no randomization at the
// boundary, so the realized false-alarm rate is conservative (<= delta).
Calibration calibrate_threshold(const TreeTopology& topology, const AttackPlacement& placement,
                                const FlipStrategy& strategy,
                                const std::vector<OperatingPoint>& points,
                                const FusionWeights& weights, double delta, long long trials,
                                std::uint64_t seed, int replication = 1);

struct LevelRateCheck {
  int level = 0;
  long long bits = 0;     // observations per hypothesis
  double rate_h0 = 0.0;   // empirical one-rate under H0
  double rate_h1 = 0.0;
  double pi10 = 0.0;      // analytic channel
  double pi11 = 0.0;
};

struct FusionReport {
  double threshold = 0.0;
  bool degenerate = false;
  bool enough_calibration_samples = true;
  long long trials = 0;
  int replication = 1;
  double p_f_hat = 0.0;
  double p_f_se = 0.0;
  double p_m_hat = 0.0;
  double p_m_se = 0.0;
  std::vector<LevelRateCheck> rates;
};

// Calibrates on H0, then measures false-alarm and missed-detection rates on
// fresh trials and compares per-level one-rates against the analytic channel.
// `replication` fuses that many independent copies of the tree per trial
// (statistics added), which is how the exponent slope is probed.
// `assumed` lets the FC run with a mismatched attack hypothesis; by default it
// uses the placement's true configuration.
FusionReport run_fusion_experiment(const TreeTopology& topology, const AttackPlacement& placement,
                                   const FlipStrategy& strategy,
                                   const std::vector<OperatingPoint>& points, double delta,
                                   long long trials, std::uint64_t seed, int replication = 1,
                                   const AttackConfig* assumed = nullptr);

}  // namespace byztree
