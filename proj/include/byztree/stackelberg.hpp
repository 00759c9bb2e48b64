#pragma once

#include <optional>
#include <vector>

#include "byztree/attack_model.hpp"
#include "byztree/divergence.hpp"
#include "byztree/rational.hpp"
#include "byztree/topology.hpp"

namespace byztree {

// Defensive resource set, costs in descending order. Exact rationals so the
// knapsack floor divisions carry no rounding.
class CostSet {
 public:
  explicit CostSet(std::vector<Rational> costs);
  const std::vector<Rational>& costs() const { return costs_; }
  int size() const { return static_cast<int>(costs_.size()); }
  const Rational& max_cost() const { return costs_.front(); }
  const Rational& min_cost() const { return costs_.back(); }

 private:
  std::vector<Rational> costs_;
};

struct Budgets {
  Rational network;
  Rational attacker;
};

// Polynomial-time condition: c_max <= min_k (N_{k+1}/N_k) * c_min.
// Depth-1 trees have no ratio constraint and always pass.
bool check_cost_structure(const CostSet& costs, const TreeTopology& topology);

// Attacker best response under the cost structure: fill level 1 first, cascade
// the remaining budget downward, capping each B_k at N_k.
AttackConfig llp_greedy(const std::vector<Rational>& allocated_costs, const TreeTopology& topology,
                        const Rational& attacker_budget);

// True iff the greedy/optimal response pushes some cumulative coverage to 1/2
// or beyond (FC blinded from that level on). Reported, never silently hidden.
bool coverage_reaches_blinding(const TreeTopology& topology, const AttackConfig& config);

// Exhaustive oracle over all feasible {B_k}; minimizes D under the optimal
// (1,1) attack, ties broken lexicographically descending. Throws when the
// enumeration would exceed `limit` configurations.
AttackConfig llp_bruteforce(const std::vector<Rational>& allocated_costs,
                            const TreeTopology& topology,
                            const std::vector<OperatingPoint>& points,
                            const Rational& attacker_budget, long long limit = 5'000'000);

struct GameSolution {
  std::vector<Rational> allocated_costs;  // c~_k per level
  std::vector<long long> attack;          // attacker best response B_k
  double defender_kld;                    // D at the equilibrium
  double baseline_kld;                    // D with no Byzantines
  double attacker_profit;                 // D(empty) - D(S)
  bool blinding_flagged;                  // coverage reached 1/2 somewhere
};

// Iterative-elimination algorithm for the bi-level program. Empty candidate
// set (network budget excludes every K-subset) is the distinguished infeasible
// outcome. Argmin ties on floor(budget/c) break toward the larger cost, which
// reproduces the worked two-level example exactly.
std::optional<GameSolution> solve_bilevel(const CostSet& costs, const TreeTopology& topology,
                                          const std::vector<OperatingPoint>& points,
                                          const Budgets& budgets);

// Oracle: exhaustive best response for every feasible cost subset, defender
// takes the max-D subset. Ties prefer the subset the iterative algorithm
// selects, then enumeration order.
std::optional<GameSolution> bilevel_bruteforce(const CostSet& costs, const TreeTopology& topology,
                                               const std::vector<OperatingPoint>& points,
                                               const Budgets& budgets,
                                               long long limit = 5'000'000);

enum class Dominance { Strict, Weak, None };

// strict: P_a > P_b and C_a <= C_b; weak: P_a = P_b and C_a <= C_b.
Dominance dominance(double profit_a, double cost_a, double profit_b, double cost_b);

struct PayoffRow {
  std::vector<long long> attack;
  bool feasible;
  double kld;
};

// Full attack-configuration payoff table (the feasibility-colored surface):
// every {B_k} in the box, flagged by budget feasibility, with min-KLD payoff.
std::vector<PayoffRow> attack_payoff_table(const std::vector<Rational>& allocated_costs,
                                           const TreeTopology& topology,
                                           const std::vector<OperatingPoint>& points,
                                           const Rational& attacker_budget,
                                           long long limit = 5'000'000);

}  // namespace byztree
