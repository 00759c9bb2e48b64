#include "byztree/attack_model.hpp"

#include <stdexcept>
#include <string>

namespace byztree {

namespace {

const Rational kOne(1);

void check_unit(const Rational& r, const char* what) {
  if (r < Rational(0) || r > kOne) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]: " + r.str());
  }
}

}  // namespace

OperatingPoint make_operating_point(double p_detect, double p_false_alarm) {
  if (!(p_false_alarm >= 0.0 && p_detect <= 1.0 && p_false_alarm <= p_detect)) {
    throw std::invalid_argument("operating point requires 0 <= p_fa <= p_d <= 1, got p_d=" +
                                std::to_string(p_detect) + " p_fa=" + std::to_string(p_false_alarm));
  }
  return OperatingPoint{p_detect, p_false_alarm};
}

std::vector<OperatingPoint> uniform_points(int depth, OperatingPoint point) {
  if (depth < 1) throw std::invalid_argument("uniform_points: depth must be >= 1");
  return std::vector<OperatingPoint>(static_cast<std::size_t>(depth), point);
}

FlipStrategy::FlipStrategy(std::vector<std::pair<Rational, Rational>> flips)
    : flips_(std::move(flips)) {
  if (flips_.empty()) throw std::invalid_argument("flip strategy: empty");
  for (const auto& [p10, p01] : flips_) {
    check_unit(p10, "flip probability p10");
    check_unit(p01, "flip probability p01");
  }
}

FlipStrategy FlipStrategy::honest(int depth) {
  return uniform(depth, Rational(0), Rational(0));
}

FlipStrategy FlipStrategy::always_flip(int depth) {
  return uniform(depth, kOne, kOne);
}

FlipStrategy FlipStrategy::uniform(int depth, const Rational& p10, const Rational& p01) {
  if (depth < 1) throw std::invalid_argument("flip strategy: depth must be >= 1");
  return FlipStrategy(std::vector<std::pair<Rational, Rational>>(
      static_cast<std::size_t>(depth), {p10, p01}));
}

const Rational& FlipStrategy::p10(int level) const {
  if (level < 1 || level > depth()) throw std::out_of_range("flip strategy: level out of range");
  return flips_[level - 1].first;
}

const Rational& FlipStrategy::p01(int level) const {
  if (level < 1 || level > depth()) throw std::out_of_range("flip strategy: level out of range");
  return flips_[level - 1].second;
}

std::pair<Rational, Rational> beta_aggregates(const AttackConfig& config,
                                              const FlipStrategy& strategy, int level) {
  if (strategy.depth() != config.depth()) {
    throw std::invalid_argument("beta_aggregates: strategy depth != config depth");
  }
  if (level < 1 || level > config.depth()) {
    throw std::out_of_range("beta_aggregates: level out of range");
  }
  Rational b10, b01;
  for (int j = 1; j <= level; ++j) {
    const Rational alpha = config.fraction(j);
    b10 += alpha * strategy.p10(j);
    b01 += alpha * strategy.p01(j);
  }
  // cannot exceed 1 under valid non-overlap configs; fail fast otherwise
  check_unit(b10, "beta_{1,0}");
  check_unit(b01, "beta_{0,1}");
  return {b10, b01};
}

LevelChannel level_channel(const AttackConfig& config, const FlipStrategy& strategy,
                           OperatingPoint point, int level) {
  const auto [b10, b01] = beta_aggregates(config, strategy, level);
  const double beta10 = b10.to_double();
  const double beta01 = b01.to_double();
  LevelChannel ch;
  ch.beta10 = beta10;
  ch.beta01 = beta01;
  ch.pi10 = beta10 * (1.0 - point.p_false_alarm) + (1.0 - beta01) * point.p_false_alarm;
  ch.pi11 = beta10 * (1.0 - point.p_detect) + (1.0 - beta01) * point.p_detect;
  return ch;
}

LevelChannel channel_from_coverage(double coverage, double p10, double p01, OperatingPoint point) {
  if (!(coverage >= 0.0 && coverage <= 1.0)) {
    throw std::invalid_argument("channel_from_coverage: coverage outside [0,1]");
  }
  LevelChannel ch;
  ch.beta10 = coverage * p10;
  ch.beta01 = coverage * p01;
  ch.pi10 = ch.beta10 * (1.0 - point.p_false_alarm) + (1.0 - ch.beta01) * point.p_false_alarm;
  ch.pi11 = ch.beta10 * (1.0 - point.p_detect) + (1.0 - ch.beta01) * point.p_detect;
  return ch;
}

Rational blinding_mass(const AttackConfig& config, const FlipStrategy& strategy, int level) {
  if (strategy.depth() != config.depth()) {
    throw std::invalid_argument("blinding_mass: strategy depth != config depth");
  }
  if (level < 1 || level > config.depth()) {
    throw std::out_of_range("blinding_mass: level out of range");
  }
  Rational acc;
  for (int j = 1; j <= level; ++j) {
    acc += config.fraction(j) * (strategy.p10(j) + strategy.p01(j));
  }
  return acc;
}

bool is_blinding(const AttackConfig& config, const FlipStrategy& strategy) {
  if (strategy.depth() != config.depth()) {
    throw std::invalid_argument("is_blinding: strategy depth != config depth");
  }
  Rational acc;
  for (int k = 1; k <= config.depth(); ++k) {
    acc += config.fraction(k) * (strategy.p10(k) + strategy.p01(k));
    if (acc != kOne) return false;
  }
  return true;
}

AttackConfig min_byzantines_to_blind(const TreeTopology& topology) {
  std::vector<long long> counts(topology.depth(), 0);
  const long long n1 = topology.level_size(1);
  counts[0] = (n1 + 1) / 2;  // ceil(N_1 / 2)
  return AttackConfig(topology, counts);
}

}  // namespace byztree
