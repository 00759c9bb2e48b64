#include "byztree/identification.hpp"

#include <cmath>
#include <string>

#include "byztree/rng.hpp"
#include "byztree/stats.hpp"

namespace byztree {

namespace {

void check_level(const IdentificationParams& params, int level) {
  if (level < 1 || level > params.depth()) {
    throw std::out_of_range("identification: level " + std::to_string(level) + " out of range");
  }
}

void check_hypothesis(int hypothesis) {
  if (hypothesis != 0 && hypothesis != 1) {
    throw std::invalid_argument("identification: hypothesis must be 0 or 1");
  }
}

double diff_against_anchor(double anchor_one_rate, double node_one_rate) {
  return anchor_one_rate * (1.0 - node_one_rate) + (1.0 - anchor_one_rate) * node_one_rate;
}

// Q((eta - T p) / sqrt(T p (1-p))); degenerate p collapses to a step.
double gaussian_exceed(double eta, int window, double p) {
  const double var = window * p * (1.0 - p);
  if (var <= 0.0) return window * p > eta ? 1.0 : 0.0;
  return normal_tail((eta - window * p) / std::sqrt(var));
}

double prior(const IdentificationParams& params, int hypothesis) {
  return hypothesis == 0 ? params.prior_h0 : params.prior_h1;
}

}  // namespace

void validate_identification_params(const IdentificationParams& params) {
  if (params.node_points.empty()) {
    throw std::invalid_argument("identification: node operating points are empty");
  }
  if (params.window < 0) throw std::invalid_argument("identification: window T must be >= 0");
  if (!(params.prior_h0 >= 0.0 && params.prior_h1 >= 0.0 &&
        std::fabs(params.prior_h0 + params.prior_h1 - 1.0) < 1e-12)) {
    throw std::invalid_argument("identification: priors must be non-negative and sum to 1");
  }
  if (params.deltas.size() != params.node_points.size()) {
    throw std::invalid_argument("identification: need one delta per level");
  }
  for (std::size_t i = 0; i < params.deltas.size(); ++i) {
    if (!(params.deltas[i] > 0.0 && params.deltas[i] < 0.5)) {
      throw std::invalid_argument("identification: delta at level " + std::to_string(i + 1) +
                                  " must lie in (0, 0.5)");
    }
  }
  const auto [f10, f01] = params.byz_flip;
  if (!(f10 >= 0.0 && f10 <= 1.0 && f01 >= 0.0 && f01 <= 1.0)) {
    throw std::invalid_argument("identification: byzantine flip probabilities outside [0,1]");
  }
  for (int k = 1; k <= params.depth(); ++k) {
    const double max_h = std::max(p_diff_honest(params, k, 0), p_diff_honest(params, k, 1));
    const double min_b = std::min(p_diff_byzantine(params, k, 0), p_diff_byzantine(params, k, 1));
    if (!(max_h < min_b)) {
      throw std::invalid_argument(
          "identification: separation condition fails at level " + std::to_string(k) +
          " (max_l P_diff_AH = " + std::to_string(max_h) +
          " !< min_l P_diff_AB = " + std::to_string(min_b) + ")");
    }
  }
}

double p_diff_honest(const IdentificationParams& params, int level, int hypothesis) {
  check_level(params, level);
  check_hypothesis(hypothesis);
  const OperatingPoint& n = params.node_points[level - 1];
  const double pa = hypothesis == 1 ? params.anchor.p_detect : params.anchor.p_false_alarm;
  const double pn = hypothesis == 1 ? n.p_detect : n.p_false_alarm;
  return diff_against_anchor(pa, pn);
}

double p_diff_byzantine(const IdentificationParams& params, int level, int hypothesis) {
  check_level(params, level);
  check_hypothesis(hypothesis);
  const OperatingPoint& n = params.node_points[level - 1];
  const double pa = hypothesis == 1 ? params.anchor.p_detect : params.anchor.p_false_alarm;
  const double pn = hypothesis == 1 ? n.p_detect : n.p_false_alarm;
  const auto [f10, f01] = params.byz_flip;
  const double sent_one = pn * (1.0 - f01) + (1.0 - pn) * f10;
  return diff_against_anchor(pa, sent_one);
}

double p_diff_honest_mixture(const IdentificationParams& params, int level) {
  return params.prior_h0 * p_diff_honest(params, level, 0) +
         params.prior_h1 * p_diff_honest(params, level, 1);
}

double p_diff_byzantine_mixture(const IdentificationParams& params, int level) {
  return params.prior_h0 * p_diff_byzantine(params, level, 0) +
         params.prior_h1 * p_diff_byzantine(params, level, 1);
}

double compute_threshold(const IdentificationParams& params, int level) {
  check_level(params, level);
  const double delta = params.deltas[level - 1];
  const double qi = normal_tail_quantile(delta);
  const int T = params.window;
  auto candidate = [&](double p) { return qi * std::sqrt(T * p * (1.0 - p)) + T * p; };
  if (params.mode == HypothesisMode::RedrawPerSlot) {
    return candidate(p_diff_honest_mixture(params, level));
  }
  // l* = argmax_l b(k,l): the larger Eq.-25 candidate keeps both hypotheses at
  // or under delta
  return std::max(candidate(p_diff_honest(params, level, 0)),
                  candidate(p_diff_honest(params, level, 1)));
}

std::vector<double> compute_thresholds(const IdentificationParams& params) {
  std::vector<double> etas;
  etas.reserve(params.depth());
  for (int k = 1; k <= params.depth(); ++k) etas.push_back(compute_threshold(params, k));
  return etas;
}

namespace {

void check_thresholds(const IdentificationParams& params, const std::vector<double>& thresholds,
                      int level) {
  check_level(params, level);
  if (static_cast<int>(thresholds.size()) < level) {
    throw std::invalid_argument("identification: thresholds required for levels 1..k");
  }
}

}  // namespace

double p_iso_exact(const IdentificationParams& params, const std::vector<double>& thresholds,
                   int level) {
  check_thresholds(params, thresholds, level);
  const int T = params.window;
  auto cut = [&](int k) { return static_cast<int>(std::floor(thresholds[k - 1])); };
  if (params.mode == HypothesisMode::RedrawPerSlot) {
    double v = binomial_tail(T, p_diff_byzantine_mixture(params, level), cut(level));
    for (int m = 1; m < level; ++m) {
      v *= binomial_cdf(T, p_diff_honest_mixture(params, m), cut(m));
    }
    return v;
  }
  double total = 0.0;
  for (int l = 0; l <= 1; ++l) {
    double v = binomial_tail(T, p_diff_byzantine(params, level, l), cut(level));
    for (int m = 1; m < level; ++m) {
      v *= binomial_cdf(T, p_diff_honest(params, m, l), cut(m));
    }
    total += prior(params, l) * v;
  }
  return total;
}

double p_iso_normal(const IdentificationParams& params, const std::vector<double>& thresholds,
                    int level) {
  check_thresholds(params, thresholds, level);
  const int T = params.window;
  if (params.mode == HypothesisMode::RedrawPerSlot) {
    double v = gaussian_exceed(thresholds[level - 1], T, p_diff_byzantine_mixture(params, level));
    for (int m = 1; m < level; ++m) {
      v *= 1.0 - gaussian_exceed(thresholds[m - 1], T, p_diff_honest_mixture(params, m));
    }
    return v;
  }
  double total = 0.0;
  for (int l = 0; l <= 1; ++l) {
    double v = gaussian_exceed(thresholds[level - 1], T, p_diff_byzantine(params, level, l));
    for (int m = 1; m < level; ++m) {
      v *= 1.0 - gaussian_exceed(thresholds[m - 1], T, p_diff_honest(params, m, l));
    }
    total += prior(params, l) * v;
  }
  return total;
}

double p_iso_recursive(const IdentificationParams& params, const std::vector<double>& thresholds,
                       int level) {
  check_thresholds(params, thresholds, level);
  const int T = params.window;
  auto run = [&](auto pb, auto ph) {
    double p = gaussian_exceed(thresholds[0], T, pb(1));  // a(1,l)
    for (int k = 1; k < level; ++k) {
      const double a_k = gaussian_exceed(thresholds[k - 1], T, pb(k));
      const double a_next = gaussian_exceed(thresholds[k], T, pb(k + 1));
      const double b_k = gaussian_exceed(thresholds[k - 1], T, ph(k));
      if (a_k == 0.0) {
        throw approximation_domain_error(
            "p_iso_recursive: a(k,l) underflowed to zero at level " + std::to_string(k) +
            "; the normal-approximation recursion is undefined here");
      }
      p = (1.0 - b_k) * (a_next / a_k) * p;
    }
    return p;
  };
  if (params.mode == HypothesisMode::RedrawPerSlot) {
    return run([&](int k) { return p_diff_byzantine_mixture(params, k); },
               [&](int k) { return p_diff_honest_mixture(params, k); });
  }
  double total = 0.0;
  for (int l = 0; l <= 1; ++l) {
    total += prior(params, l) * run([&](int k) { return p_diff_byzantine(params, k, l); },
                                    [&](int k) { return p_diff_honest(params, k, l); });
  }
  return total;
}

bool normal_approximation_in_range(const IdentificationParams& params) {
  const int T = params.window;
  for (int k = 1; k <= params.depth(); ++k) {
    for (int l = 0; l <= 1; ++l) {
      for (double p : {p_diff_honest(params, k, l), p_diff_byzantine(params, k, l)}) {
        if (T * p * (1.0 - p) < 9.0) return false;
      }
    }
  }
  return true;
}

double asymptotic_lower_bound(const std::vector<double>& deltas, int level) {
  if (level < 1) throw std::invalid_argument("asymptotic_lower_bound: level must be >= 1");
  if (level == 1) return 1.0;
  if (static_cast<int>(deltas.size()) < level - 1) {
    throw std::invalid_argument("asymptotic_lower_bound: deltas required for levels 2..level-1");
  }
  double bound = 1.0;
  for (int j = 2; j <= level - 1; ++j) bound *= 1.0 - deltas[j - 1];
  return bound;
}

IsolationReport simulate_identification(const TreeTopology& topology,
                                        const AttackPlacement& placement,
                                        const IdentificationParams& params, long long trials,
                                        std::uint64_t seed) {
  validate_identification_params(params);
  if (params.depth() != topology.depth()) {
    throw std::invalid_argument("simulate_identification: params depth != topology depth");
  }
  if (placement.depth() != topology.depth()) {
    throw std::invalid_argument("simulate_identification: placement depth != topology depth");
  }
  if (trials < 1) throw std::invalid_argument("simulate_identification: trials must be >= 1");

  const int depth = topology.depth();
  const int T = params.window;
  const std::vector<double> etas = compute_thresholds(params);
  std::vector<long long> cuts(depth);
  for (int k = 0; k < depth; ++k) cuts[k] = static_cast<long long>(std::floor(etas[k]));

  const auto [f10, f01] = params.byz_flip;
  std::vector<std::vector<int>> dist(depth);
  std::vector<std::vector<int>> src(depth);
  std::vector<std::vector<char>> isolated(depth), blocked(depth);
  for (int k = 0; k < depth; ++k) {
    dist[k].assign(topology.level_size(k + 1), 0);
    isolated[k].assign(topology.level_size(k + 1), 0);
    blocked[k].assign(topology.level_size(k + 1), 0);
    src[k].resize(topology.level_size(k + 1));
    for (long long i = 0; i < topology.level_size(k + 1); ++i) {
      src[k][i] = placement.byzantine_level_on_path(k + 1, i);
    }
  }

  struct Counter {
    long long byz_iso = 0, byz_n = 0;
    long long clean_iso = 0, clean_n = 0;
    long long covered_iso = 0, covered_n = 0;
  };
  std::vector<Counter> counts(depth);

  for (long long trial = 0; trial < trials; ++trial) {
    Rng rng(derive_seed(seed, 0x6964656e74ULL, static_cast<std::uint64_t>(trial)));  // "ident"
    for (int k = 0; k < depth; ++k) std::fill(dist[k].begin(), dist[k].end(), 0);

    int hyp = rng.bernoulli(params.prior_h1) ? 1 : 0;
    for (int t = 0; t < T; ++t) {
      if (params.mode == HypothesisMode::RedrawPerSlot && t > 0) {
        hyp = rng.bernoulli(params.prior_h1) ? 1 : 0;
      }
      const bool anchor =
          rng.bernoulli(hyp == 1 ? params.anchor.p_detect : params.anchor.p_false_alarm);
      for (int k = 0; k < depth; ++k) {
        const OperatingPoint& op = params.node_points[k];
        const double p_one = hyp == 1 ? op.p_detect : op.p_false_alarm;
        const long long nk = topology.level_size(k + 1);
        for (long long i = 0; i < nk; ++i) {
          bool bit = rng.bernoulli(p_one);
          if (src[k][i] != 0) {
            bit = bit ? rng.bernoulli(1.0 - f01) : rng.bernoulli(f10);
          }
          if (bit != anchor) ++dist[k][i];
        }
      }
    }

    // top-down isolation pass
    for (int k = 0; k < depth; ++k) {
      const long long nk = topology.level_size(k + 1);
      const long long ratio = k == 0 ? 1 : nk / topology.level_size(k);
      for (long long i = 0; i < nk; ++i) {
        const long long parent = i / ratio;
        const bool gate = k > 0 && (blocked[k - 1][parent] || isolated[k - 1][parent]);
        blocked[k][i] = gate ? 1 : 0;
        isolated[k][i] = (!gate && dist[k][i] > cuts[k]) ? 1 : 0;
      }
    }

    for (int k = 0; k < depth; ++k) {
      const long long nk = topology.level_size(k + 1);
      for (long long i = 0; i < nk; ++i) {
        Counter& c = counts[k];
        if (src[k][i] == k + 1) {
          ++c.byz_n;
          c.byz_iso += isolated[k][i];
        } else if (src[k][i] == 0) {
          ++c.clean_n;
          c.clean_iso += isolated[k][i];
        } else {
          ++c.covered_n;
          c.covered_iso += isolated[k][i];
        }
      }
    }
  }

  IsolationReport report;
  report.trials = trials;
  auto rate_se = [](long long hits, long long n, double& rate, double& se) {
    rate = n > 0 ? static_cast<double>(hits) / static_cast<double>(n) : 0.0;
    se = n > 0 ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(n)) : 0.0;
  };
  for (int k = 0; k < depth; ++k) {
    IsolationLevelStats s;
    s.level = k + 1;
    s.threshold = etas[k];
    s.byz_observations = counts[k].byz_n;
    rate_se(counts[k].byz_iso, counts[k].byz_n, s.byz_rate, s.byz_se);
    s.honest_clean_observations = counts[k].clean_n;
    rate_se(counts[k].clean_iso, counts[k].clean_n, s.honest_clean_rate, s.honest_clean_se);
    s.honest_covered_observations = counts[k].covered_n;
    double dummy_se;
    rate_se(counts[k].covered_iso, counts[k].covered_n, s.honest_covered_rate, dummy_se);
    report.levels.push_back(s);
  }
  return report;
}

}  // namespace byztree
