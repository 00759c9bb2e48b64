#pragma once

#include <cstdint>
#include <vector>

#include "byztree/rational.hpp"

namespace byztree {

// Regular tree rooted at the fusion center. Level 1 holds the FC's direct
// children; every node at level k has degree a_{k+1}, so N_1 = a_1 and
// N_{k+1} = N_k * a_{k+1}. Depth 1 models the parallel topology.
// Immutable after construction.
class TreeTopology {
 public:
  explicit TreeTopology(std::vector<int> degrees);

  int depth() const { return static_cast<int>(degrees_.size()); }
  int degree(int level) const;
  long long level_size(int level) const;  // N_k
  long long total_size() const { return total_; }
  const std::vector<long long>& level_sizes() const { return sizes_; }

  // Index of the ancestor at level `ancestor_level` of node `index` at `level`.
  // Node indices run 0..N_k-1; subtrees occupy contiguous index ranges.
  long long ancestor_index(int level, long long index, int ancestor_level) const;

 private:
  std::vector<int> degrees_;
  std::vector<long long> sizes_;
  long long total_;
};

// Per-level Byzantine counts B_k for a given topology. Validates
// 0 <= B_k <= N_k; the non-overlap feasibility (cumulative coverage <= 1) is
// the placement sampler's concern, so capped greedy outputs that oversubscribe
// a subtree can still be represented and flagged.
class AttackConfig {
 public:
  AttackConfig(const TreeTopology& topology, std::vector<long long> counts);

  int depth() const { return static_cast<int>(counts_.size()); }
  const std::vector<long long>& counts() const { return counts_; }
  long long count(int level) const;
  Rational fraction(int level) const;  // alpha_k = B_k / N_k
  long long total() const;
  const std::vector<long long>& level_sizes() const { return sizes_; }

 private:
  std::vector<long long> counts_;
  std::vector<long long> sizes_;
};

// t_k = sum_{j<=k} alpha_j: probability that a bit originating at level k
// meets a Byzantine on its way to the FC.
Rational coverage_fraction(const TreeTopology& topology, const AttackConfig& config, int level);

// All K coverage fractions at once.
std::vector<Rational> coverage_fractions(const TreeTopology& topology, const AttackConfig& config);

// sum_{i<=k} B_i * N_k / N_i; exact integer for regular trees.
long long corrupted_path_count(const TreeTopology& topology, const AttackConfig& config, int level);

// True iff a non-overlapping placement exists (t_k <= 1 at every level).
bool placement_feasible(const TreeTopology& topology, const AttackConfig& config);

// Concrete node marks realizing an AttackConfig without ancestor/descendant
// overlap.
class AttackPlacement {
 public:
  AttackPlacement(const TreeTopology& topology, std::vector<std::vector<long long>> byz_indices);

  int depth() const { return static_cast<int>(byz_.size()); }
  const std::vector<std::vector<long long>>& byzantine_indices() const { return byz_; }
  bool is_byzantine(int level, long long index) const;

  // Level of the unique Byzantine on the path of node (level, index) to the
  // FC, including the node itself; 0 when the path is clean.
  int byzantine_level_on_path(int level, long long index) const;

  AttackConfig config(const TreeTopology& topology) const;

 private:
  std::vector<std::vector<long long>> byz_;       // sorted per level
  std::vector<std::vector<int>> source_level_;    // per node: covering byz level or 0
};

// Fills levels top-down, drawing uniformly among nodes whose path is still
// clean. Deterministic for a fixed seed; throws if the counts cannot be placed.
AttackPlacement sample_placement(const TreeTopology& topology, const AttackConfig& config,
                                 std::uint64_t seed);

}  // namespace byztree
