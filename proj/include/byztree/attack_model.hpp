#pragma once

#include <utility>
#include <vector>

#include "byztree/rational.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Local detector operating point (P_d^k, P_fa^k). p_false_alarm == p_detect is
// tolerated as the uninformative boundary; most results assume the strict
// inequality and say so where it matters.
struct OperatingPoint {
  double p_detect;
  double p_false_alarm;
};

OperatingPoint make_operating_point(double p_detect, double p_false_alarm);

// Expands a single point to all levels (the paper's identical-threshold case).
std::vector<OperatingPoint> uniform_points(int depth, OperatingPoint point);

// Per-level flipping probabilities (P_{1,0}^k, P_{0,1}^k), exact rationals so
// the blinding condition can be tested without rounding. Honest behavior is
// the fixed (0,0) strategy.
class FlipStrategy {
 public:
  explicit FlipStrategy(std::vector<std::pair<Rational, Rational>> flips);

  static FlipStrategy honest(int depth);
  static FlipStrategy always_flip(int depth);
  static FlipStrategy uniform(int depth, const Rational& p10, const Rational& p01);

  int depth() const { return static_cast<int>(flips_.size()); }
  const Rational& p10(int level) const;
  const Rational& p01(int level) const;

 private:
  std::vector<std::pair<Rational, Rational>> flips_;
};

// Falsified per-level bit distributions at the FC.
//   pi10 = beta10 (1 - P_fa) + (1 - beta01) P_fa
//   pi11 = beta10 (1 - P_d)  + (1 - beta01) P_d
struct LevelChannel {
  double pi10;
  double pi11;
  double beta10;
  double beta01;
};

// beta^k_{1,0} = sum_{j<=k} alpha_j P_{1,0}^j and the (0,1) counterpart.
// Throws if a value leaves [0,1], which only happens for configs violating the
// non-overlap feasibility.
std::pair<Rational, Rational> beta_aggregates(const AttackConfig& config,
                                              const FlipStrategy& strategy, int level);

LevelChannel level_channel(const AttackConfig& config, const FlipStrategy& strategy,
                           OperatingPoint point, int level);

// Channel for the common single-knob setup: every bit from the level meets a
// Byzantine with probability t and is then flipped with (p10, p01).
LevelChannel channel_from_coverage(double coverage, double p10, double p01, OperatingPoint point);

// Prefix sum_{j<=k} alpha_j (P_{1,0}^j + P_{0,1}^j); the level is blinded
// exactly when this equals 1.
Rational blinding_mass(const AttackConfig& config, const FlipStrategy& strategy, int level);

// Exact test of the per-level blinding condition
// sum_{j<=k} alpha_j (P_{1,0}^j + P_{0,1}^j) = 1 for every k.
bool is_blinding(const AttackConfig& config, const FlipStrategy& strategy);

// Lemma: B_1 = ceil(N_1 / 2), zero elsewhere.
AttackConfig min_byzantines_to_blind(const TreeTopology& topology);

}  // namespace byztree
