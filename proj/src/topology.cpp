#include "byztree/topology.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "byztree/rng.hpp"

namespace byztree {

namespace {

constexpr long long kMaxNodes = 1'000'000'000'000LL;

void check_level(int level, int depth, const char* what) {
  if (level < 1 || level > depth) {
    throw std::out_of_range(std::string(what) + ": level " + std::to_string(level) +
                            " out of range 1.." + std::to_string(depth));
  }
}

void check_shape(const TreeTopology& topology, const AttackConfig& config, const char* what) {
  if (config.depth() != topology.depth() || config.level_sizes() != topology.level_sizes()) {
    throw std::invalid_argument(std::string(what) + ": attack config does not match topology shape");
  }
}

}  // namespace

TreeTopology::TreeTopology(std::vector<int> degrees) : degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("topology: degree list is empty");
  sizes_.reserve(degrees_.size());
  long long n = 1;
  for (std::size_t i = 0; i < degrees_.size(); ++i) {
    if (degrees_[i] < 2) {
      throw std::invalid_argument("topology: degree at level " + std::to_string(i + 1) +
                                  " is " + std::to_string(degrees_[i]) + ", must be >= 2");
    }
    if (n > kMaxNodes / degrees_[i]) throw std::overflow_error("topology: node count overflow");
    n *= degrees_[i];
    sizes_.push_back(n);
  }
  total_ = 0;
  for (long long s : sizes_) total_ += s;
}

int TreeTopology::degree(int level) const {
  check_level(level, depth(), "degree");
  return degrees_[level - 1];
}

long long TreeTopology::level_size(int level) const {
  check_level(level, depth(), "level_size");
  return sizes_[level - 1];
}

long long TreeTopology::ancestor_index(int level, long long index, int ancestor_level) const {
  check_level(level, depth(), "ancestor_index");
  check_level(ancestor_level, level, "ancestor_index");
  // subtree of an ancestor covers a contiguous block of N_k / N_a indices
  return index / (sizes_[level - 1] / sizes_[ancestor_level - 1]);
}

AttackConfig::AttackConfig(const TreeTopology& topology, std::vector<long long> counts)
    : counts_(std::move(counts)), sizes_(topology.level_sizes()) {
  if (static_cast<int>(counts_.size()) != topology.depth()) {
    throw std::invalid_argument("attack config: expected " + std::to_string(topology.depth()) +
                                " levels, got " + std::to_string(counts_.size()));
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0 || counts_[i] > sizes_[i]) {
      throw std::invalid_argument("attack config: B_" + std::to_string(i + 1) + " = " +
                                  std::to_string(counts_[i]) + " outside [0, " +
                                  std::to_string(sizes_[i]) + "]");
    }
  }
}

long long AttackConfig::count(int level) const {
  check_level(level, depth(), "count");
  return counts_[level - 1];
}

Rational AttackConfig::fraction(int level) const {
  check_level(level, depth(), "fraction");
  return Rational(counts_[level - 1], sizes_[level - 1]);
}

long long AttackConfig::total() const {
  long long t = 0;
  for (long long c : counts_) t += c;
  return t;
}

Rational coverage_fraction(const TreeTopology& topology, const AttackConfig& config, int level) {
  check_shape(topology, config, "coverage_fraction");
  check_level(level, topology.depth(), "coverage_fraction");
  Rational t;
  for (int j = 1; j <= level; ++j) t += config.fraction(j);
  return t;
}

std::vector<Rational> coverage_fractions(const TreeTopology& topology, const AttackConfig& config) {
  check_shape(topology, config, "coverage_fractions");
  std::vector<Rational> out;
  out.reserve(topology.depth());
  Rational t;
  for (int j = 1; j <= topology.depth(); ++j) {
    t += config.fraction(j);
    out.push_back(t);
  }
  return out;
}

long long corrupted_path_count(const TreeTopology& topology, const AttackConfig& config, int level) {
  check_shape(topology, config, "corrupted_path_count");
  check_level(level, topology.depth(), "corrupted_path_count");
  long long total = 0;
  const long long nk = topology.level_size(level);
  for (int i = 1; i <= level; ++i) {
    total += config.count(i) * (nk / topology.level_size(i));
  }
  return total;
}

bool placement_feasible(const TreeTopology& topology, const AttackConfig& config) {
  check_shape(topology, config, "placement_feasible");
  for (int k = 1; k <= topology.depth(); ++k) {
    if (corrupted_path_count(topology, config, k) > topology.level_size(k)) return false;
  }
  return true;
}

AttackPlacement::AttackPlacement(const TreeTopology& topology,
                                 std::vector<std::vector<long long>> byz_indices)
    : byz_(std::move(byz_indices)) {
  if (static_cast<int>(byz_.size()) != topology.depth()) {
    throw std::invalid_argument("placement: level count mismatch");
  }
  source_level_.resize(byz_.size());
  for (int k = 1; k <= topology.depth(); ++k) {
    auto& marks = byz_[k - 1];
    std::sort(marks.begin(), marks.end());
    for (long long idx : marks) {
      if (idx < 0 || idx >= topology.level_size(k)) {
        throw std::invalid_argument("placement: node index out of range at level " +
                                    std::to_string(k));
      }
    }
    source_level_[k - 1].assign(topology.level_size(k), 0);
    auto& src = source_level_[k - 1];
    if (k > 1) {
      const auto& up = source_level_[k - 2];
      const long long ratio = topology.level_size(k) / topology.level_size(k - 1);
      for (long long i = 0; i < topology.level_size(k); ++i) src[i] = up[i / ratio];
    }
    for (long long idx : marks) {
      if (src[idx] != 0) {
        throw std::invalid_argument("placement: overlapping Byzantines on a path at level " +
                                    std::to_string(k));
      }
      src[idx] = k;
    }
  }
}

bool AttackPlacement::is_byzantine(int level, long long index) const {
  check_level(level, depth(), "is_byzantine");
  return byzantine_level_on_path(level, index) == level &&
         std::binary_search(byz_[level - 1].begin(), byz_[level - 1].end(), index);
}

int AttackPlacement::byzantine_level_on_path(int level, long long index) const {
  check_level(level, depth(), "byzantine_level_on_path");
  const auto& src = source_level_[level - 1];
  if (index < 0 || index >= static_cast<long long>(src.size())) {
    throw std::out_of_range("byzantine_level_on_path: node index out of range");
  }
  return src[index];
}

AttackConfig AttackPlacement::config(const TreeTopology& topology) const {
  std::vector<long long> counts;
  counts.reserve(byz_.size());
  for (const auto& level : byz_) counts.push_back(static_cast<long long>(level.size()));
  return AttackConfig(topology, counts);
}

AttackPlacement sample_placement(const TreeTopology& topology, const AttackConfig& config,
                                 std::uint64_t seed) {
  check_shape(topology, config, "sample_placement");
  Rng rng(derive_seed(seed, 0x706c6163656dULL, 0));  // "placem"
  std::vector<std::vector<long long>> chosen(topology.depth());
  // covered[i] for the current level: path already owns a Byzantine
  std::vector<char> covered;
  std::vector<char> covered_prev;
  for (int k = 1; k <= topology.depth(); ++k) {
    const long long nk = topology.level_size(k);
    covered.assign(nk, 0);
    if (k > 1) {
      const long long ratio = nk / topology.level_size(k - 1);
      for (long long i = 0; i < nk; ++i) covered[i] = covered_prev[i / ratio];
    }
    std::vector<long long> eligible;
    for (long long i = 0; i < nk; ++i) {
      if (!covered[i]) eligible.push_back(i);
    }
    const long long want = config.count(k);
    if (want > static_cast<long long>(eligible.size())) {
      throw std::invalid_argument(
          "sample_placement: infeasible configuration, level " + std::to_string(k) + " needs " +
          std::to_string(want) + " clean nodes but only " + std::to_string(eligible.size()) +
          " remain under the non-overlap rule");
    }
    // partial Fisher-Yates over the eligible pool
    for (long long j = 0; j < want; ++j) {
      const long long pick = j + static_cast<long long>(rng.below(eligible.size() - j));
      std::swap(eligible[j], eligible[pick]);
      chosen[k - 1].push_back(eligible[j]);
      covered[eligible[j]] = 1;
    }
    covered_prev = covered;
  }
  return AttackPlacement(topology, std::move(chosen));
}

}  // namespace byztree
