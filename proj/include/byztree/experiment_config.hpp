#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "byztree/attack_model.hpp"
#include "byztree/identification.hpp"
#include "byztree/rational.hpp"
#include "byztree/stackelberg.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Invalid or missing configuration; the CLI maps this to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class StrategyKind { Optimal, Honest, AlwaysFlip, Explicit };

struct AttackSpec {
  std::vector<long long> counts;
  StrategyKind strategy = StrategyKind::Optimal;
  std::vector<std::pair<Rational, Rational>> explicit_flips;
  std::uint64_t placement_seed = 1;
};

struct SurfaceSpec {
  double coverage = 0.0;
  int grid = 51;
};

struct CurveSpec {
  double start = 0.0;
  double stop = 0.49;
  double step = 0.01;
};

struct GameSpec {
  std::vector<Rational> costs;
  Rational network_budget;
  Rational attacker_budget;
  long long enumeration_limit = 5'000'000;
  bool payoff_table = true;
};

struct IdentificationSpec {
  IdentificationParams params;  // window filled per run from `windows`
  std::vector<int> windows;
};

struct FusionSpec {
  double delta = 0.1;
  std::vector<int> replications;
};

// One experiment per file. Sections are optional; each subcommand demands the
// sections it needs and reports the missing field by path.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  long long trials = 100000;

  std::optional<TreeTopology> topology;
  std::vector<OperatingPoint> points;  // per level when topology present
  std::optional<AttackSpec> attack;
  std::optional<SurfaceSpec> surface;
  std::optional<CurveSpec> curve;
  std::optional<GameSpec> game;
  std::optional<IdentificationSpec> identification;
  std::optional<FusionSpec> fusion;

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);

  const TreeTopology& require_topology(const std::string& who) const;
  const AttackSpec& require_attack(const std::string& who) const;
  std::vector<OperatingPoint> require_points(const std::string& who) const;

  // Resolves the configured strategy against a concrete attack configuration.
  FlipStrategy resolve_strategy(const TreeTopology& topology, const AttackConfig& config) const;
};

}  // namespace byztree
