#pragma once

#include <utility>
#include <vector>

#include "byztree/attack_model.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Per-node KLD of the received-bit distributions, H0 against H1:
//   D_k = pi10 ln(pi10/pi11) + (1-pi10) ln((1-pi10)/(1-pi11))   [nats]
// Returns exactly 0 when pi10 == pi11 and +infinity when the H1 distribution
// is degenerate on the wrong side (pi11 in {0,1} with pi10 elsewhere); the
// 0 ln 0 = 0 convention applies, so a boundary pi10 with interior pi11 is
// finite. Infinity is a value here, not an error: boundary points arise in
// threshold sweeps.
double level_kld(const LevelChannel& channel);

struct KldReport {
  std::vector<LevelChannel> channels;
  std::vector<double> per_level;  // D_k per node, nats
  double total;                   // sum N_k D_k
};

// Full-tree missed-detection exponent. Levels whose blinding condition holds
// exactly (rational test) contribute an exact zero, so the blinding boundary
// is not subject to rounding.
KldReport total_kld(const TreeTopology& topology, const AttackConfig& config,
                    const FlipStrategy& strategy, const std::vector<OperatingPoint>& points);

// Minimizing strategy for given cumulative coverages: (1,1) everywhere while
// t_K < 1/2; once some t_k reaches 1/2, the first such level gets the
// symmetric pair solving the blinding equation and deeper levels (0,0).
FlipStrategy optimal_attack_strategy(const std::vector<Rational>& coverage);

// D evaluated at the attacker's optimum: levels at or past the blinding
// boundary contribute zero, the rest use the always-flip channel. This is the
// payoff the Stackelberg game optimizes.
double min_total_kld(const TreeTopology& topology, const AttackConfig& config,
                     const std::vector<OperatingPoint>& points);

struct GridMinResult {
  double p10;
  double p01;
  double total;  // sum N_k D_k at the minimizing pair
};

// Brute-force oracle: identical strategy at all levels, exhaustive evaluation
// on the resolution x resolution grid over [0,1]^2 including both endpoints.
// Ties break toward larger p10, then larger p01.
GridMinResult grid_min_kld(const TreeTopology& topology, const AttackConfig& config,
                           const std::vector<OperatingPoint>& points, int grid_resolution);

// D_k*(t) along the optimal (1,1) strategy; every grid point must lie in
// [0, 0.5).
std::vector<std::pair<double, double>> kld_vs_coverage(OperatingPoint point,
                                                       const std::vector<double>& coverage_grid);

// Finite-difference estimate of dD/dx_k at fixed P_fa^k, x_k = P_d^k - P_fa^k.
// Central difference when x-step stays non-negative, forward difference at the
// x = 0 boundary. Requires t_k < 1/2 at all levels.
double kld_partial_wrt_separation(const TreeTopology& topology, const AttackConfig& config,
                                  const FlipStrategy& strategy, std::vector<OperatingPoint> points,
                                  int level, double step);

// Optimal FC weights (a1, a0) = (ln(pi11/pi10), ln((1-pi11)/(1-pi10))).
std::pair<double, double> fusion_weights(const LevelChannel& channel);

// Unit-variance Gaussian shift sensor decided by a likelihood-ratio threshold.
struct GaussianSensorModel {
  double amplitude;  // mean under H1
  double threshold;  // LRT threshold, > 0
};

OperatingPoint gaussian_roc_point(const GaussianSensorModel& model);

// LRT threshold whose false-alarm rate equals p_false_alarm.
double gaussian_threshold_for_pfa(double amplitude, double p_false_alarm);

}  // namespace byztree
