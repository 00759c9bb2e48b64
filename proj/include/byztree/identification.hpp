#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "byztree/attack_model.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Raised when the normal-approximation recursion leaves its domain
// (an a(k,l) factor underflows to zero and the ratio is undefined).
class approximation_domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Whether the phenomenon is held fixed across the reputation window (matches
// the per-hypothesis factorization of the analysis) or redrawn each time slot
// (matches the numerical section; distances become mixture binomials).
enum class HypothesisMode { FixedPerWindow, RedrawPerSlot };

struct IdentificationParams {
  OperatingPoint anchor;
  double prior_h0 = 0.5;
  double prior_h1 = 0.5;
  int window = 0;  // T
  std::vector<double> deltas;              // per-level honest false-isolation caps
  std::vector<OperatingPoint> node_points;  // per level
  std::pair<double, double> byz_flip{1.0, 1.0};  // (p10, p01); (1,1) = always flip
  HypothesisMode mode = HypothesisMode::FixedPerWindow;

  int depth() const { return static_cast<int>(node_points.size()); }
};

// Validates shapes, priors, deltas in (0, 0.5), and the separation condition
// max_l P_diff_AH(k,l) < min_l P_diff_AB(k,l) at every level (hard error).
void validate_identification_params(const IdentificationParams& params);

// Probability an honest node's report differs from the anchor's under H_l.
double p_diff_honest(const IdentificationParams& params, int level, int hypothesis);

// Same for a Byzantine node flipping with params.byz_flip.
double p_diff_byzantine(const IdentificationParams& params, int level, int hypothesis);

// Prior-weighted mixtures (the per-slot-redraw distances are Binomial in these).
double p_diff_honest_mixture(const IdentificationParams& params, int level);
double p_diff_byzantine_mixture(const IdentificationParams& params, int level);

// Reputation threshold: eta_k = Qinv(delta_k) sqrt(T p (1-p)) + T p with p the
// honest diff probability -- the worst hypothesis in fixed mode, the mixture in
// redraw mode.
double compute_threshold(const IdentificationParams& params, int level);
std::vector<double> compute_thresholds(const IdentificationParams& params);

// Exact binomial-sum isolation probability for a Byzantine at `level` whose
// ancestors are honest. Distances are integers, so the comparisons use
// floor(eta): isolated iff d > floor(eta_k), ancestors pass iff d <= floor(eta_m).
double p_iso_exact(const IdentificationParams& params, const std::vector<double>& thresholds,
                   int level);

// Direct normal-approximation product form.
double p_iso_normal(const IdentificationParams& params, const std::vector<double>& thresholds,
                    int level);

// The recursion P(k+1) = sum_l P_l (1-b(k,l)) (a(k+1,l)/a(k,l)) P(k,l);
// algebraically equal to p_iso_normal, kept separate as written.
double p_iso_recursive(const IdentificationParams& params, const std::vector<double>& thresholds,
                       int level);

// True when T p (1-p) >= 9 for every probability entering the approximation.
bool normal_approximation_in_range(const IdentificationParams& params);

// Asymptotic (T -> infinity) lower bound for a Byzantine at `level`:
// 1 for level 1, prod_{j=2}^{level-1} (1 - delta_j) otherwise.
double asymptotic_lower_bound(const std::vector<double>& deltas, int level);

struct IsolationLevelStats {
  int level = 0;
  double threshold = 0.0;
  // Byzantine nodes at this level
  long long byz_observations = 0;
  double byz_rate = 0.0;
  double byz_se = 0.0;
  // honest nodes with a clean path (the delta_k-calibrated population)
  long long honest_clean_observations = 0;
  double honest_clean_rate = 0.0;
  double honest_clean_se = 0.0;
  // honest nodes under an unidentified Byzantine ancestor (collateral)
  long long honest_covered_observations = 0;
  double honest_covered_rate = 0.0;
};

struct IsolationReport {
  long long trials = 0;
  std::vector<IsolationLevelStats> levels;
};

// Bit-level Monte Carlo of the whole scheme: draws anchor and node decisions,
// applies Byzantine flips along paths, accumulates Hamming distances, then
// runs the top-down isolation pass (children of isolated nodes are skipped).
// Deterministic per seed with per-trial derived substreams.
IsolationReport simulate_identification(const TreeTopology& topology,
                                        const AttackPlacement& placement,
                                        const IdentificationParams& params, long long trials,
                                        std::uint64_t seed);

}  // namespace byztree
