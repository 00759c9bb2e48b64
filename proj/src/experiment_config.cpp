#include "byztree/experiment_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace byztree {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_in(const json& j, const std::string& path, double lo, double hi) {
  const double v = number(j, path);
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << "value " << v << " outside [" << lo << ", " << hi << "]";
    fail(path, os.str());
  }
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

OperatingPoint point(const json& j, const std::string& path) {
  const double pd = number_in(member(j, path, "p_d"), path + ".p_d", 0.0, 1.0);
  const double pfa = number_in(member(j, path, "p_fa"), path + ".p_fa", 0.0, 1.0);
  try {
    return make_operating_point(pd, pfa);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

Rational rational(const json& j, const std::string& path) {
  const double v = number(j, path);
  try {
    return Rational::from_double(v);
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

template <typename F>
auto wrap(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentConfig cfg;
  if (j.contains("seed")) {
    const long long s = integer(j["seed"], "seed");
    if (s < 0) fail("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (j.contains("trials")) {
    cfg.trials = integer(j["trials"], "trials");
    if (cfg.trials < 1) fail("trials", "must be >= 1");
  }

  if (j.contains("topology")) {
    const json& jt = member(j["topology"], "topology", "degrees");
    if (!jt.is_array() || jt.empty()) fail("topology.degrees", "expected a non-empty array");
    std::vector<int> degrees;
    for (std::size_t i = 0; i < jt.size(); ++i) {
      degrees.push_back(static_cast<int>(integer(jt[i], "topology.degrees[" + std::to_string(i) + "]")));
    }
    cfg.topology = wrap("topology.degrees", [&] { return TreeTopology(degrees); });
  }

  if (j.contains("operating_point") && j.contains("operating_points")) {
    fail("operating_point", "give either operating_point or operating_points, not both");
  }
  if (j.contains("operating_point")) {
    const OperatingPoint p = point(j["operating_point"], "operating_point");
    const int depth = cfg.topology ? cfg.topology->depth() : 1;
    cfg.points = uniform_points(depth, p);
  } else if (j.contains("operating_points")) {
    const json& ja = j["operating_points"];
    if (!ja.is_array() || ja.empty()) fail("operating_points", "expected a non-empty array");
    for (std::size_t i = 0; i < ja.size(); ++i) {
      cfg.points.push_back(point(ja[i], "operating_points[" + std::to_string(i) + "]"));
    }
    if (cfg.topology && static_cast<int>(cfg.points.size()) != cfg.topology->depth()) {
      fail("operating_points", "need exactly one point per topology level");
    }
  }

  if (j.contains("attack")) {
    const json& ja = j["attack"];
    AttackSpec spec;
    const json& jc = member(ja, "attack", "counts");
    if (!jc.is_array() || jc.empty()) fail("attack.counts", "expected a non-empty array");
    for (std::size_t i = 0; i < jc.size(); ++i) {
      spec.counts.push_back(integer(jc[i], "attack.counts[" + std::to_string(i) + "]"));
    }
    if (ja.contains("placement_seed")) {
      const long long s = integer(ja["placement_seed"], "attack.placement_seed");
      if (s < 0) fail("attack.placement_seed", "must be non-negative");
      spec.placement_seed = static_cast<std::uint64_t>(s);
    }
    if (ja.contains("strategy")) {
      const json& js = ja["strategy"];
      if (js.is_string()) {
        const std::string s = js.get<std::string>();
        if (s == "optimal") {
          spec.strategy = StrategyKind::Optimal;
        } else if (s == "honest") {
          spec.strategy = StrategyKind::Honest;
        } else if (s == "always_flip") {
          spec.strategy = StrategyKind::AlwaysFlip;
        } else {
          fail("attack.strategy", "unknown strategy '" + s +
                                      "' (use optimal, honest, always_flip, or an array)");
        }
      } else if (js.is_array()) {
        spec.strategy = StrategyKind::Explicit;
        for (std::size_t i = 0; i < js.size(); ++i) {
          const std::string p = "attack.strategy[" + std::to_string(i) + "]";
          const Rational p10 = rational(member(js[i], p, "p10"), p + ".p10");
          const Rational p01 = rational(member(js[i], p, "p01"), p + ".p01");
          spec.explicit_flips.emplace_back(p10, p01);
        }
      } else {
        fail("attack.strategy", "expected a string or an array");
      }
    }
    cfg.attack = std::move(spec);
  }

  if (j.contains("surface")) {
    const json& js = j["surface"];
    SurfaceSpec spec;
    spec.coverage = number_in(member(js, "surface", "coverage"), "surface.coverage", 0.0, 1.0);
    if (js.contains("grid")) {
      spec.grid = static_cast<int>(integer(js["grid"], "surface.grid"));
      if (spec.grid < 2) fail("surface.grid", "resolution must be >= 2");
    }
    cfg.surface = spec;
  }

  if (j.contains("coverage_curve")) {
    const json& js = j["coverage_curve"];
    CurveSpec spec;
    spec.start = number_in(member(js, "coverage_curve", "start"), "coverage_curve.start", 0.0, 0.5);
    spec.stop = number_in(member(js, "coverage_curve", "stop"), "coverage_curve.stop", 0.0, 0.5);
    spec.step = number(member(js, "coverage_curve", "step"), "coverage_curve.step");
    if (!(spec.step > 0.0)) fail("coverage_curve.step", "must be positive");
    if (spec.stop < spec.start) fail("coverage_curve.stop", "must be >= start");
    if (spec.stop >= 0.5) fail("coverage_curve.stop", "grid must stay below 0.5");
    cfg.curve = spec;
  }

  if (j.contains("game")) {
    const json& jg = j["game"];
    GameSpec spec;
    const json& jc = member(jg, "game", "costs");
    if (!jc.is_array() || jc.empty()) fail("game.costs", "expected a non-empty array");
    for (std::size_t i = 0; i < jc.size(); ++i) {
      spec.costs.push_back(rational(jc[i], "game.costs[" + std::to_string(i) + "]"));
    }
    wrap("game.costs", [&] { return CostSet(spec.costs); });
    spec.network_budget = rational(member(jg, "game", "network_budget"), "game.network_budget");
    spec.attacker_budget = rational(member(jg, "game", "attacker_budget"), "game.attacker_budget");
    if (spec.network_budget < Rational(0)) fail("game.network_budget", "must be non-negative");
    if (spec.attacker_budget < Rational(0)) fail("game.attacker_budget", "must be non-negative");
    if (jg.contains("enumeration_limit")) {
      spec.enumeration_limit = integer(jg["enumeration_limit"], "game.enumeration_limit");
      if (spec.enumeration_limit < 1) fail("game.enumeration_limit", "must be >= 1");
    }
    if (jg.contains("payoff_table")) {
      if (!jg["payoff_table"].is_boolean()) fail("game.payoff_table", "expected a boolean");
      spec.payoff_table = jg["payoff_table"].get<bool>();
    }
    cfg.game = std::move(spec);
  }

  if (j.contains("identification")) {
    const json& ji = j["identification"];
    IdentificationSpec spec;
    spec.params.anchor = point(member(ji, "identification", "anchor"), "identification.anchor");
    if (ji.contains("prior_h1")) {
      spec.params.prior_h1 =
          number_in(ji["prior_h1"], "identification.prior_h1", 0.0, 1.0);
      spec.params.prior_h0 = 1.0 - spec.params.prior_h1;
    }
    if (ji.contains("node_points")) {
      const json& jn = ji["node_points"];
      if (!jn.is_array() || jn.empty()) fail("identification.node_points", "expected a non-empty array");
      for (std::size_t i = 0; i < jn.size(); ++i) {
        spec.params.node_points.push_back(
            point(jn[i], "identification.node_points[" + std::to_string(i) + "]"));
      }
    } else {
      if (cfg.points.empty()) {
        fail("identification.node_points", "missing and no global operating points to fall back on");
      }
      spec.params.node_points = cfg.points;
    }
    const json& jd = member(ji, "identification", "deltas");
    if (jd.is_array()) {
      for (std::size_t i = 0; i < jd.size(); ++i) {
        spec.params.deltas.push_back(
            number(jd[i], "identification.deltas[" + std::to_string(i) + "]"));
      }
    } else {
      spec.params.deltas.assign(spec.params.node_points.size(), number(jd, "identification.deltas"));
    }
    const json& jw = member(ji, "identification", "windows");
    if (!jw.is_array() || jw.empty()) fail("identification.windows", "expected a non-empty array");
    for (std::size_t i = 0; i < jw.size(); ++i) {
      const long long w = integer(jw[i], "identification.windows[" + std::to_string(i) + "]");
      if (w < 0) fail("identification.windows[" + std::to_string(i) + "]", "must be >= 0");
      spec.windows.push_back(static_cast<int>(w));
    }
    if (ji.contains("mode")) {
      const std::string m = ji["mode"].is_string() ? ji["mode"].get<std::string>() : std::string();
      if (m == "fixed") {
        spec.params.mode = HypothesisMode::FixedPerWindow;
      } else if (m == "redraw") {
        spec.params.mode = HypothesisMode::RedrawPerSlot;
      } else {
        fail("identification.mode", "expected \"fixed\" or \"redraw\"");
      }
    }
    if (ji.contains("byz_flip")) {
      const json& jf = ji["byz_flip"];
      spec.params.byz_flip = {
          number_in(member(jf, "identification.byz_flip", "p10"), "identification.byz_flip.p10", 0.0, 1.0),
          number_in(member(jf, "identification.byz_flip", "p01"), "identification.byz_flip.p01", 0.0, 1.0)};
    }
    spec.params.window = spec.windows.front();
    wrap("identification", [&] {
      validate_identification_params(spec.params);
      return 0;
    });
    cfg.identification = std::move(spec);
  }

  if (j.contains("fusion")) {
    const json& jf = j["fusion"];
    FusionSpec spec;
    spec.delta = number(member(jf, "fusion", "delta"), "fusion.delta");
    if (!(spec.delta > 0.0 && spec.delta <= 1.0)) fail("fusion.delta", "must lie in (0, 1]");
    if (jf.contains("replications")) {
      const json& jr = jf["replications"];
      if (!jr.is_array()) fail("fusion.replications", "expected an array");
      for (std::size_t i = 0; i < jr.size(); ++i) {
        const long long m = integer(jr[i], "fusion.replications[" + std::to_string(i) + "]");
        if (m < 1) fail("fusion.replications[" + std::to_string(i) + "]", "must be >= 1");
        spec.replications.push_back(static_cast<int>(m));
      }
    }
    cfg.fusion = spec;
  }

  // cross-section shape checks
  if (cfg.topology) {
    if (cfg.attack && static_cast<int>(cfg.attack->counts.size()) != cfg.topology->depth()) {
      fail("attack.counts", "need exactly one count per topology level");
    }
    if (cfg.attack) {
      wrap("attack.counts", [&] { return AttackConfig(*cfg.topology, cfg.attack->counts); });
    }
    if (cfg.attack && cfg.attack->strategy == StrategyKind::Explicit &&
        static_cast<int>(cfg.attack->explicit_flips.size()) != cfg.topology->depth()) {
      fail("attack.strategy", "need exactly one flip pair per topology level");
    }
    if (cfg.identification &&
        static_cast<int>(cfg.identification->params.node_points.size()) != cfg.topology->depth()) {
      fail("identification.node_points", "need exactly one point per topology level");
    }
  }
  return cfg;
}

const TreeTopology& ExperimentConfig::require_topology(const std::string& who) const {
  if (!topology) throw ConfigError(who + " requires a topology section");
  return *topology;
}

const AttackSpec& ExperimentConfig::require_attack(const std::string& who) const {
  if (!attack) throw ConfigError(who + " requires an attack section");
  return *attack;
}

std::vector<OperatingPoint> ExperimentConfig::require_points(const std::string& who) const {
  if (points.empty()) throw ConfigError(who + " requires operating_point(s)");
  if (topology && static_cast<int>(points.size()) != topology->depth()) {
    throw ConfigError(who + ": operating points do not match topology depth");
  }
  return points;
}

FlipStrategy ExperimentConfig::resolve_strategy(const TreeTopology& topo,
                                                const AttackConfig& config) const {
  const StrategyKind kind = attack ? attack->strategy : StrategyKind::Optimal;
  switch (kind) {
    case StrategyKind::Honest:
      return FlipStrategy::honest(topo.depth());
    case StrategyKind::AlwaysFlip:
      return FlipStrategy::always_flip(topo.depth());
    case StrategyKind::Explicit:
      return FlipStrategy(attack->explicit_flips);
    case StrategyKind::Optimal:
    default:
      return optimal_attack_strategy(coverage_fractions(topo, config));
  }
}

}  // namespace byztree
