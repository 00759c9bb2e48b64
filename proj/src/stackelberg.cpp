#include "byztree/stackelberg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace byztree {

namespace {

const Rational kHalf(1, 2);
const Rational kZero(0);

void check_allocated(const std::vector<Rational>& allocated, const TreeTopology& topology) {
  if (allocated.empty()) throw std::invalid_argument("allocated costs: empty");
  if (static_cast<int>(allocated.size()) != topology.depth()) {
    throw std::invalid_argument("allocated costs: expected one cost per level");
  }
  for (const Rational& c : allocated) {
    if (!(c > kZero)) throw std::invalid_argument("allocated costs: costs must be positive");
  }
}

long long box_size(const TreeTopology& topology, long long limit) {
  long long cells = 1;
  for (long long n : topology.level_sizes()) {
    if (cells > limit / (n + 1)) {
      throw std::invalid_argument("enumeration limit exceeded: attack box larger than " +
                                  std::to_string(limit));
    }
    cells *= n + 1;
  }
  return cells;
}

// all K-subsets of indices 0..n-1, each kept in ascending index order, which
// is descending cost order for a descending cost set
std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k > n || k <= 0) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

Rational attack_cost(const std::vector<Rational>& allocated, const std::vector<long long>& attack) {
  Rational c;
  for (std::size_t k = 0; k < attack.size(); ++k) c += allocated[k] * Rational(attack[k]);
  return c;
}

GameSolution make_solution(std::vector<Rational> allocated, std::vector<long long> attack,
                           const TreeTopology& topology, const std::vector<OperatingPoint>& points) {
  GameSolution sol;
  sol.allocated_costs = std::move(allocated);
  sol.attack = std::move(attack);
  const AttackConfig config(topology, sol.attack);
  sol.defender_kld = min_total_kld(topology, config, points);
  const AttackConfig empty(topology, std::vector<long long>(topology.depth(), 0));
  sol.baseline_kld = min_total_kld(topology, empty, points);
  sol.attacker_profit = sol.baseline_kld - sol.defender_kld;
  sol.blinding_flagged = coverage_reaches_blinding(topology, config);
  return sol;
}

}  // namespace

CostSet::CostSet(std::vector<Rational> costs) : costs_(std::move(costs)) {
  if (costs_.empty()) throw std::invalid_argument("cost set: empty");
  for (std::size_t i = 0; i < costs_.size(); ++i) {
    if (!(costs_[i] > kZero)) throw std::invalid_argument("cost set: costs must be positive");
    if (i > 0 && costs_[i] > costs_[i - 1]) {
      throw std::invalid_argument("cost set: costs must be sorted descending");
    }
  }
}

bool check_cost_structure(const CostSet& costs, const TreeTopology& topology) {
  if (topology.depth() == 1) return true;
  Rational min_ratio = Rational(topology.level_size(2), topology.level_size(1));
  for (int k = 2; k < topology.depth(); ++k) {
    const Rational r(topology.level_size(k + 1), topology.level_size(k));
    if (r < min_ratio) min_ratio = r;
  }
  return costs.max_cost() <= min_ratio * costs.min_cost();
}

AttackConfig llp_greedy(const std::vector<Rational>& allocated_costs, const TreeTopology& topology,
                        const Rational& attacker_budget) {
  check_allocated(allocated_costs, topology);
  if (attacker_budget < kZero) throw std::invalid_argument("llp_greedy: negative budget");
  Rational remaining = attacker_budget;
  std::vector<long long> counts;
  counts.reserve(topology.depth());
  for (int k = 1; k <= topology.depth(); ++k) {
    const Rational& c = allocated_costs[k - 1];
    long long b = std::min(floor_quotient(remaining, c), topology.level_size(k));
    counts.push_back(b);
    remaining -= c * Rational(b);
  }
  return AttackConfig(topology, std::move(counts));
}

bool coverage_reaches_blinding(const TreeTopology& topology, const AttackConfig& config) {
  Rational t;
  for (int k = 1; k <= topology.depth(); ++k) {
    t += config.fraction(k);
    if (t >= kHalf) return true;
  }
  return false;
}

AttackConfig llp_bruteforce(const std::vector<Rational>& allocated_costs,
                            const TreeTopology& topology,
                            const std::vector<OperatingPoint>& points,
                            const Rational& attacker_budget, long long limit) {
  check_allocated(allocated_costs, topology);
  box_size(topology, limit);
  const int depth = topology.depth();
  std::vector<long long> current(depth, 0);
  std::vector<long long> best;
  double best_kld = 0.0;
  bool have_best = false;
  while (true) {
    if (attack_cost(allocated_costs, current) <= attacker_budget) {
      const double d = min_total_kld(topology, AttackConfig(topology, current), points);
      // minimize D; on exact ties prefer the lexicographically larger config
      const bool better = !have_best || d < best_kld ||
                          (d == best_kld && std::lexicographical_compare(best.begin(), best.end(),
                                                                         current.begin(),
                                                                         current.end()));
      if (better) {
        best = current;
        best_kld = d;
        have_best = true;
      }
    }
    int k = depth - 1;
    while (k >= 0 && current[k] == topology.level_size(k + 1)) {
      current[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++current[k];
  }
  return AttackConfig(topology, best);
}

std::optional<GameSolution> solve_bilevel(const CostSet& costs, const TreeTopology& topology,
                                          const std::vector<OperatingPoint>& points,
                                          const Budgets& budgets) {
  if (!check_cost_structure(costs, topology)) {
    throw std::invalid_argument("solve_bilevel: cost structure condition violated");
  }
  const int depth = topology.depth();
  std::vector<std::vector<int>> subsets = k_subsets(costs.size(), depth);
  std::vector<std::vector<int>> survivors;
  for (const auto& s : subsets) {
    Rational deploy;
    for (int k = 0; k < depth; ++k) {
      deploy += costs.costs()[s[k]] * Rational(topology.level_size(k + 1));
    }
    if (deploy <= budgets.network) survivors.push_back(s);
  }
  if (survivors.empty()) return std::nullopt;

  std::vector<Rational> allocated;
  std::vector<long long> attack;
  Rational remaining = budgets.attacker;
  for (int k = 0; k < depth; ++k) {
    long long min_floor = 0;
    bool first = true;
    for (const auto& s : survivors) {
      const long long q = floor_quotient(remaining, costs.costs()[s[k]]);
      if (first || q < min_floor) {
        min_floor = q;
        first = false;
      }
    }
    // argmin set; ties toward the larger cost (reproduces the worked example)
    Rational chosen = costs.costs()[survivors.front()[k]];
    bool have = false;
    for (const auto& s : survivors) {
      const Rational& c = costs.costs()[s[k]];
      if (floor_quotient(remaining, c) == min_floor && (!have || c > chosen)) {
        chosen = c;
        have = true;
      }
    }
    allocated.push_back(chosen);
    const long long b = std::min(floor_quotient(remaining, chosen), topology.level_size(k + 1));
    attack.push_back(b);
    remaining -= chosen * Rational(b);
    std::vector<std::vector<int>> next;
    for (const auto& s : survivors) {
      if (costs.costs()[s[k]] == chosen) next.push_back(s);
    }
    survivors = std::move(next);
  }
  return make_solution(std::move(allocated), std::move(attack), topology, points);
}

std::optional<GameSolution> bilevel_bruteforce(const CostSet& costs, const TreeTopology& topology,
                                               const std::vector<OperatingPoint>& points,
                                               const Budgets& budgets, long long limit) {
  const int depth = topology.depth();
  std::vector<std::vector<int>> subsets = k_subsets(costs.size(), depth);
  std::optional<GameSolution> algo;
  if (check_cost_structure(costs, topology)) {
    algo = solve_bilevel(costs, topology, points, budgets);
  }
  std::optional<GameSolution> best;
  for (const auto& s : subsets) {
    std::vector<Rational> allocated;
    Rational deploy;
    for (int k = 0; k < depth; ++k) {
      allocated.push_back(costs.costs()[s[k]]);
      deploy += allocated.back() * Rational(topology.level_size(k + 1));
    }
    if (deploy > budgets.network) continue;
    const AttackConfig response =
        llp_bruteforce(allocated, topology, points, budgets.attacker, limit);
    GameSolution sol = make_solution(allocated, response.counts(), topology, points);
    if (!best || sol.defender_kld > best->defender_kld) {
      best = std::move(sol);
    } else if (algo && sol.defender_kld == best->defender_kld &&
               sol.allocated_costs == algo->allocated_costs &&
               best->allocated_costs != algo->allocated_costs) {
      best = std::move(sol);  // tie: prefer the subset the algorithm selects
    }
  }
  return best;
}

Dominance dominance(double profit_a, double cost_a, double profit_b, double cost_b) {
  if (profit_a > profit_b && cost_a <= cost_b) return Dominance::Strict;
  if (profit_a == profit_b && cost_a <= cost_b) return Dominance::Weak;
  return Dominance::None;
}

std::vector<PayoffRow> attack_payoff_table(const std::vector<Rational>& allocated_costs,
                                           const TreeTopology& topology,
                                           const std::vector<OperatingPoint>& points,
                                           const Rational& attacker_budget, long long limit) {
  check_allocated(allocated_costs, topology);
  const long long cells = box_size(topology, limit);
  std::vector<PayoffRow> rows;
  rows.reserve(static_cast<std::size_t>(cells));
  const int depth = topology.depth();
  std::vector<long long> current(depth, 0);
  while (true) {
    PayoffRow row;
    row.attack = current;
    row.feasible = attack_cost(allocated_costs, current) <= attacker_budget;
    row.kld = min_total_kld(topology, AttackConfig(topology, current), points);
    rows.push_back(std::move(row));
    int k = depth - 1;
    while (k >= 0 && current[k] == topology.level_size(k + 1)) {
      current[k] = 0;
      --k;
    }
    if (k < 0) break;
    ++current[k];
  }
  return rows;
}

}  // namespace byztree
