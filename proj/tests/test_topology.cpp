#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "byztree/topology.hpp"

using namespace byztree;

TEST_CASE("regular tree node counts") {
  const TreeTopology t({2, 3, 2});
  CHECK(t.depth() == 3);
  CHECK(t.level_size(1) == 2);
  CHECK(t.level_size(2) == 6);
  CHECK(t.level_size(3) == 12);
  CHECK(t.total_size() == 20);

  const TreeTopology single({2});
  CHECK(single.level_size(1) == 2);
  CHECK(single.total_size() == 2);

  const TreeTopology t33({3, 3});
  CHECK(t33.level_size(1) == 3);
  CHECK(t33.level_size(2) == 9);
  CHECK(t33.total_size() == 12);
}

TEST_CASE("topology validation names the offending level") {
  CHECK_THROWS_AS(TreeTopology({}), std::invalid_argument);
  CHECK_THROWS_WITH_AS(TreeTopology({2, 1, 2}),
                       "topology: degree at level 2 is 1, must be >= 2", std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology({0}), std::invalid_argument);
}

TEST_CASE("attack config validation") {
  const TreeTopology t({2, 3, 2});
  CHECK_NOTHROW(AttackConfig(t, {2, 0, 0}));
  CHECK_THROWS_AS(AttackConfig(t, {3, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AttackConfig(t, {0, -1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(AttackConfig(t, {1, 0}), std::invalid_argument);
  const AttackConfig c(t, {1, 2, 3});
  CHECK(c.fraction(1) == Rational(1, 2));
  CHECK(c.fraction(2) == Rational(1, 3));
  CHECK(c.fraction(3) == Rational(1, 4));
  CHECK(c.total() == 6);
}

TEST_CASE("coverage fraction") {
  const TreeTopology t({2, 3, 2});
  CHECK(coverage_fraction(t, AttackConfig(t, {1, 0, 0}), 3) == Rational(1, 2));
  for (int level = 1; level <= 3; ++level) {
    CHECK(coverage_fraction(t, AttackConfig(t, {0, 0, 0}), level) == Rational(0));
  }
  const TreeTopology t62({6, 2});
  CHECK(coverage_fraction(t62, AttackConfig(t62, {2, 1}), 2) == Rational(5, 12));
  CHECK_THROWS_AS(coverage_fraction(t, AttackConfig(t, {0, 0, 0}), 4), std::out_of_range);
  CHECK_THROWS_AS(coverage_fraction(t62, AttackConfig(t, {0, 0, 0}), 1), std::invalid_argument);
}

TEST_CASE("corrupted path count") {
  const TreeTopology t({2, 3, 2});
  CHECK(corrupted_path_count(t, AttackConfig(t, {1, 0, 0}), 3) == 6);
  CHECK(corrupted_path_count(t, AttackConfig(t, {0, 0, 0}), 3) == 0);
  CHECK(corrupted_path_count(t, AttackConfig(t, {0, 2, 0}), 2) == 2);
}

TEST_CASE("corrupted paths counted by walking a placed tree") {
  // independent oracle: place, then walk every node's ancestor chain
  const TreeTopology t62({6, 2});
  const AttackConfig c(t62, {2, 1});
  const AttackPlacement placement = sample_placement(t62, c, 11);
  for (int level = 1; level <= 2; ++level) {
    long long corrupted = 0;
    for (long long i = 0; i < t62.level_size(level); ++i) {
      if (placement.byzantine_level_on_path(level, i) != 0) ++corrupted;
    }
    CHECK(corrupted == corrupted_path_count(t62, c, level));
    CHECK(Rational(corrupted, t62.level_size(level)) == coverage_fraction(t62, c, level));
  }
}

TEST_CASE("placement forced and infeasible cases") {
  const TreeTopology t({2, 3, 2});
  SUBCASE("both level-1 nodes forced") {
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL}) {
      const AttackPlacement p = sample_placement(t, AttackConfig(t, {2, 0, 0}), seed);
      CHECK(p.byzantine_indices()[0] == std::vector<long long>{0, 1});
    }
  }
  SUBCASE("level-2 marks forced under the unmarked subtree") {
    for (std::uint64_t seed : {3ULL, 17ULL}) {
      const AttackPlacement p = sample_placement(t, AttackConfig(t, {1, 3, 0}), seed);
      const long long root = p.byzantine_indices()[0][0];
      const long long other = 1 - root;
      for (long long idx : p.byzantine_indices()[1]) {
        CHECK(t.ancestor_index(2, idx, 1) == other);
      }
      CHECK(p.byzantine_indices()[1].size() == 3);
    }
  }
  SUBCASE("infeasible when every level-2 node is covered") {
    CHECK_THROWS_AS(sample_placement(t, AttackConfig(t, {2, 1, 0}), 5), std::invalid_argument);
  }
}

TEST_CASE("placement determinism and per-level counts") {
  const TreeTopology t({3, 2, 2});
  const AttackConfig c(t, {1, 2, 1});
  const AttackPlacement a = sample_placement(t, c, 42);
  const AttackPlacement b = sample_placement(t, c, 42);
  CHECK(a.byzantine_indices() == b.byzantine_indices());
  for (int k = 1; k <= 3; ++k) {
    CHECK(static_cast<long long>(a.byzantine_indices()[k - 1].size()) == c.count(k));
  }
  CHECK(a.config(t).counts() == c.counts());
}

TEST_CASE("every leaf-to-root path holds at most one byzantine") {
  std::mt19937_64 eng(2024);
  for (int rep = 0; rep < 60; ++rep) {
    std::vector<int> degrees(1 + eng() % 3);
    for (auto& d : degrees) d = 2 + static_cast<int>(eng() % 3);
    const TreeTopology t(degrees);
    std::vector<long long> counts(t.depth());
    // draw feasible counts level by level against remaining clean capacity
    Rational covered(0);
    for (int k = 1; k <= t.depth(); ++k) {
      const long long clean =
          t.level_size(k) - (covered * Rational(t.level_size(k))).num();
      counts[k - 1] = clean > 0 ? static_cast<long long>(eng() % (clean + 1)) : 0;
      covered += Rational(counts[k - 1], t.level_size(k));
    }
    const AttackConfig c(t, counts);
    REQUIRE(placement_feasible(t, c));
    const AttackPlacement p = sample_placement(t, c, eng());
    const int K = t.depth();
    for (long long leaf = 0; leaf < t.level_size(K); ++leaf) {
      int byz_on_path = 0;
      for (int k = 1; k <= K; ++k) {
        const long long anc = t.ancestor_index(K, leaf, k);
        if (p.is_byzantine(k, anc)) ++byz_on_path;
      }
      CHECK(byz_on_path <= 1);
      // cross-check the cached source-level map against the walk
      const int src = p.byzantine_level_on_path(K, leaf);
      CHECK((src != 0) == (byz_on_path == 1));
    }
    // coverage is non-decreasing in level
    Rational prev(0);
    for (int k = 1; k <= K; ++k) {
      const Rational tk = coverage_fraction(t, c, k);
      CHECK(tk >= prev);
      prev = tk;
    }
  }
}
