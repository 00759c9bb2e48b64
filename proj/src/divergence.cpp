#include "byztree/divergence.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "byztree/stats.hpp"

namespace byztree {

namespace {

const Rational kHalf(1, 2);
const Rational kOne(1);

void check_points(const std::vector<OperatingPoint>& points, int depth, const char* what) {
  if (static_cast<int>(points.size()) != depth) {
    throw std::invalid_argument(std::string(what) + ": expected one operating point per level");
  }
}

}  // namespace

double level_kld(const LevelChannel& channel) {
  const double p = channel.pi10;
  const double q = channel.pi11;
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("level_kld: channel probabilities outside [0,1]");
  }
  if (p == q) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  if (q == 0.0) return p > 0.0 ? inf : 0.0;
  if (q == 1.0) return p < 1.0 ? inf : 0.0;
  double d = 0.0;
  if (p > 0.0) d += p * std::log(p / q);
  if (p < 1.0) d += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return d;
}

KldReport total_kld(const TreeTopology& topology, const AttackConfig& config,
                    const FlipStrategy& strategy, const std::vector<OperatingPoint>& points) {
  check_points(points, topology.depth(), "total_kld");
  KldReport report;
  report.total = 0.0;
  for (int k = 1; k <= topology.depth(); ++k) {
    LevelChannel ch = level_channel(config, strategy, points[k - 1], k);
    double dk;
    if (blinding_mass(config, strategy, k) == kOne) {
      // exact blinding: pi10 == pi11 algebraically, keep the zero exact
      ch.pi11 = ch.pi10;
      dk = 0.0;
    } else {
      dk = level_kld(ch);
    }
    report.channels.push_back(ch);
    report.per_level.push_back(dk);
    report.total += static_cast<double>(topology.level_size(k)) * dk;
  }
  return report;
}

FlipStrategy optimal_attack_strategy(const std::vector<Rational>& coverage) {
  if (coverage.empty()) throw std::invalid_argument("optimal_attack_strategy: empty coverage");
  Rational prev(0);
  for (const Rational& t : coverage) {
    if (t < prev) throw std::invalid_argument("optimal_attack_strategy: coverage must be non-decreasing");
    if (t > kOne) throw std::invalid_argument("optimal_attack_strategy: coverage above 1");
    prev = t;
  }
  const int depth = static_cast<int>(coverage.size());
  std::vector<std::pair<Rational, Rational>> flips;
  flips.reserve(depth);
  bool blinded = false;
  Rational t_prev(0);
  for (int k = 0; k < depth; ++k) {
    if (blinded) {
      flips.emplace_back(Rational(0), Rational(0));
    } else if (coverage[k] < kHalf) {
      flips.emplace_back(kOne, kOne);
    } else {
      // first level at or past the boundary: symmetric pair solving
      // 2 t_{k-1} + alpha_k (p + p) = 1
      const Rational alpha = coverage[k] - t_prev;
      const Rational p = (kOne - Rational(2) * t_prev) / (Rational(2) * alpha);
      flips.emplace_back(p, p);
      blinded = true;
    }
    t_prev = coverage[k];
  }
  return FlipStrategy(std::move(flips));
}

double min_total_kld(const TreeTopology& topology, const AttackConfig& config,
                     const std::vector<OperatingPoint>& points) {
  check_points(points, topology.depth(), "min_total_kld");
  double total = 0.0;
  Rational t;
  for (int k = 1; k <= topology.depth(); ++k) {
    t += config.fraction(k);
    if (t >= kHalf) continue;  // blinded from here on contributes zero
    const LevelChannel ch = channel_from_coverage(t.to_double(), 1.0, 1.0, points[k - 1]);
    total += static_cast<double>(topology.level_size(k)) * level_kld(ch);
  }
  return total;
}

GridMinResult grid_min_kld(const TreeTopology& topology, const AttackConfig& config,
                           const std::vector<OperatingPoint>& points, int grid_resolution) {
  check_points(points, topology.depth(), "grid_min_kld");
  if (grid_resolution < 2) throw std::invalid_argument("grid_min_kld: resolution must be >= 2");
  std::vector<double> t(topology.depth());
  {
    Rational acc;
    for (int k = 1; k <= topology.depth(); ++k) {
      acc += config.fraction(k);
      t[k - 1] = acc.to_double();
    }
  }
  GridMinResult best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  bool first = true;
  for (int i = 0; i < grid_resolution; ++i) {
    const double p10 = static_cast<double>(i) / (grid_resolution - 1);
    for (int j = 0; j < grid_resolution; ++j) {
      const double p01 = static_cast<double>(j) / (grid_resolution - 1);
      double total = 0.0;
      for (int k = 1; k <= topology.depth(); ++k) {
        const LevelChannel ch = channel_from_coverage(t[k - 1], p10, p01, points[k - 1]);
        total += static_cast<double>(topology.level_size(k)) * level_kld(ch);
      }
      const bool better =
          first || total < best.total ||
          (total == best.total && (p10 > best.p10 || (p10 == best.p10 && p01 > best.p01)));
      if (better) {
        best = {p10, p01, total};
        first = false;
      }
    }
  }
  return best;
}

std::vector<std::pair<double, double>> kld_vs_coverage(OperatingPoint point,
                                                       const std::vector<double>& coverage_grid) {
  std::vector<std::pair<double, double>> out;
  out.reserve(coverage_grid.size());
  for (double t : coverage_grid) {
    if (!(t >= 0.0 && t < 0.5)) {
      throw std::invalid_argument("kld_vs_coverage: grid point outside [0, 0.5)");
    }
    out.emplace_back(t, level_kld(channel_from_coverage(t, 1.0, 1.0, point)));
  }
  return out;
}

double kld_partial_wrt_separation(const TreeTopology& topology, const AttackConfig& config,
                                  const FlipStrategy& strategy, std::vector<OperatingPoint> points,
                                  int level, double step) {
  check_points(points, topology.depth(), "kld_partial_wrt_separation");
  if (level < 1 || level > topology.depth()) {
    throw std::out_of_range("kld_partial_wrt_separation: level out of range");
  }
  if (!(step > 0.0)) throw std::invalid_argument("kld_partial_wrt_separation: step must be > 0");
  // the blinding boundary itself is allowed (sensitivity vanishes there)
  for (int k = 1; k <= topology.depth(); ++k) {
    if (coverage_fraction(topology, config, k) > kHalf) {
      throw std::invalid_argument("kld_partial_wrt_separation: requires t_k <= 1/2 at all levels");
    }
  }
  const OperatingPoint base = points[level - 1];
  const double x = base.p_detect - base.p_false_alarm;
  if (base.p_detect + step > 1.0) {
    throw std::invalid_argument("kld_partial_wrt_separation: step pushes P_d past 1");
  }
  auto eval = [&](double xv) {
    points[level - 1] = make_operating_point(base.p_false_alarm + xv, base.p_false_alarm);
    return total_kld(topology, config, strategy, points).total;
  };
  if (x - step >= 0.0) {
    return (eval(x + step) - eval(x - step)) / (2.0 * step);
  }
  return (eval(x + step) - eval(x)) / step;  // one-sided at the uninformative boundary
}

std::pair<double, double> fusion_weights(const LevelChannel& channel) {
  const double p = channel.pi10;
  const double q = channel.pi11;
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
    throw std::domain_error("fusion_weights: channel probabilities outside [0,1]");
  }
  if (p == q) return {0.0, 0.0};  // blinded level carries zero weight
  return {std::log(q / p), std::log((1.0 - q) / (1.0 - p))};
}

OperatingPoint gaussian_roc_point(const GaussianSensorModel& model) {
  if (!(model.amplitude > 0.0)) throw std::invalid_argument("gaussian model: amplitude must be > 0");
  if (!(model.threshold > 0.0) || !std::isfinite(model.threshold)) {
    throw std::invalid_argument("gaussian model: threshold must be positive and finite");
  }
  // LRT exp(mu x - mu^2/2) >< lambda  <=>  x >< ln(lambda)/mu + mu/2
  const double tau = std::log(model.threshold) / model.amplitude + model.amplitude / 2.0;
  const double pfa = normal_tail(tau);
  const double pd = normal_tail(tau - model.amplitude);
  return make_operating_point(pd, pfa);
}

double gaussian_threshold_for_pfa(double amplitude, double p_false_alarm) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("gaussian model: amplitude must be > 0");
  if (!(p_false_alarm > 0.0 && p_false_alarm < 1.0)) {
    throw std::invalid_argument("gaussian model: target p_fa must be in (0,1)");
  }
  const double tau = normal_tail_quantile(p_false_alarm);
  return std::exp(amplitude * (tau - amplitude / 2.0));
}

}  // namespace byztree
