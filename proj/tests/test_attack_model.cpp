#include <doctest.h>

#include <random>
#include <stdexcept>

#include "byztree/attack_model.hpp"
#include "byztree/divergence.hpp"

using namespace byztree;

TEST_CASE("operating point validation") {
  CHECK_NOTHROW(make_operating_point(0.8, 0.2));
  CHECK_NOTHROW(make_operating_point(0.5, 0.5));  // uninformative boundary allowed
  CHECK_THROWS_AS(make_operating_point(0.2, 0.8), std::invalid_argument);
  CHECK_THROWS_AS(make_operating_point(1.2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_operating_point(0.8, -0.1), std::invalid_argument);
}

TEST_CASE("beta aggregates") {
  SUBCASE("no byzantines") {
    const TreeTopology t({2, 3, 2});
    const AttackConfig c(t, {0, 0, 0});
    const auto [b10, b01] = beta_aggregates(c, FlipStrategy::always_flip(3), 3);
    CHECK(b10 == Rational(0));
    CHECK(b01 == Rational(0));
  }
  SUBCASE("level-1 coverage 0.4 with always-flip") {
    const TreeTopology t({5, 2});
    const AttackConfig c(t, {2, 0});
    const auto [b10, b01] = beta_aggregates(c, FlipStrategy::always_flip(2), 2);
    CHECK(b10 == Rational(2, 5));
    CHECK(b01 == Rational(2, 5));
  }
  SUBCASE("alpha (1/3, 1/12) sums to 5/12") {
    const TreeTopology t({6, 2});
    const AttackConfig c(t, {2, 1});
    const auto [b10, b01] = beta_aggregates(c, FlipStrategy::always_flip(2), 2);
    CHECK(b10 == Rational(5, 12));
    CHECK(b01 == Rational(5, 12));
  }
  SUBCASE("shape mismatch") {
    const TreeTopology t({2, 3});
    const AttackConfig c(t, {0, 0});
    CHECK_THROWS_AS(beta_aggregates(c, FlipStrategy::always_flip(3), 1), std::invalid_argument);
  }
}

TEST_CASE("level channel") {
  SUBCASE("identity channel without attack") {
    const TreeTopology t({2});
    const AttackConfig c(t, {0});
    const LevelChannel ch =
        level_channel(c, FlipStrategy::always_flip(1), make_operating_point(0.8, 0.2), 1);
    CHECK(ch.pi10 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(ch.pi11 == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("coverage 0.4 always-flip") {
    const TreeTopology t({5});
    const AttackConfig c(t, {2});
    const LevelChannel ch =
        level_channel(c, FlipStrategy::always_flip(1), make_operating_point(0.8, 0.2), 1);
    CHECK(ch.pi10 == doctest::Approx(0.44).epsilon(1e-15));
    CHECK(ch.pi11 == doctest::Approx(0.56).epsilon(1e-15));
  }
  SUBCASE("blinding point gives the symmetric channel") {
    const TreeTopology t({2});
    const AttackConfig c(t, {1});
    const LevelChannel ch =
        level_channel(c, FlipStrategy::always_flip(1), make_operating_point(0.8, 0.2), 1);
    CHECK(ch.pi10 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(ch.pi11 == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("channel_from_coverage matches level_channel") {
  const TreeTopology t({5, 2});
  const AttackConfig c(t, {2, 0});
  const OperatingPoint op = make_operating_point(0.9, 0.15);
  const LevelChannel a = level_channel(c, FlipStrategy::always_flip(2), op, 2);
  const LevelChannel b = channel_from_coverage(0.4, 1.0, 1.0, op);
  CHECK(a.pi10 == doctest::Approx(b.pi10).epsilon(1e-15));
  CHECK(a.pi11 == doctest::Approx(b.pi11).epsilon(1e-15));
}

TEST_CASE("blinding condition") {
  SUBCASE("alpha_1 = 1/2 with always flip blinds") {
    const TreeTopology t({2, 2});
    const AttackConfig c(t, {1, 0});
    CHECK(is_blinding(c, FlipStrategy::always_flip(2)));
  }
  SUBCASE("below half coverage never blinds") {
    const TreeTopology t({5, 2});
    const AttackConfig c(t, {2, 0});
    CHECK_FALSE(is_blinding(c, FlipStrategy::always_flip(2)));
  }
  SUBCASE("quarter-quarter fails the level-1 condition") {
    const TreeTopology t({4, 2});
    const AttackConfig c(t, {1, 2});  // alpha = (1/4, 1/4)
    CHECK(coverage_fraction(t, c, 2) == Rational(1, 2));
    CHECK_FALSE(is_blinding(c, FlipStrategy::always_flip(2)));
  }
}

TEST_CASE("minimum byzantines to blind") {
  CHECK(min_byzantines_to_blind(TreeTopology({6, 2})).count(1) == 3);
  CHECK(min_byzantines_to_blind(TreeTopology({2, 2})).count(1) == 1);
  CHECK(min_byzantines_to_blind(TreeTopology({5, 2})).count(1) == 3);
  const AttackConfig c = min_byzantines_to_blind(TreeTopology({6, 3, 2}));
  CHECK(c.count(2) == 0);
  CHECK(c.count(3) == 0);
}

TEST_CASE("blinding holds at the minimal count and fails below it") {
  // exhaustive over small trees: a blinding strategy exists iff B_1 >= ceil(N_1/2)
  for (const auto& degrees : {std::vector<int>{2, 2}, std::vector<int>{3, 2}, std::vector<int>{4, 2}}) {
    const TreeTopology t(degrees);
    const AttackConfig minimal = min_byzantines_to_blind(t);
    const auto coverage = coverage_fractions(t, minimal);
    CHECK(is_blinding(minimal, optimal_attack_strategy(coverage)));
    if (t.level_size(1) % 2 == 0) {
      CHECK(is_blinding(minimal, FlipStrategy::always_flip(t.depth())));
    }
    for (long long b1 = 0; b1 < minimal.count(1); ++b1) {
      for (long long b2 = 0; b2 <= t.level_size(2); ++b2) {
        std::vector<long long> counts{b1, b2};
        const AttackConfig c(t, counts);
        if (!placement_feasible(t, c)) continue;
        CHECK_FALSE(is_blinding(c, FlipStrategy::always_flip(2)));
        CHECK_FALSE(is_blinding(c, optimal_attack_strategy(coverage_fractions(t, c))));
      }
    }
  }
}

TEST_CASE("honest strategy reproduces the raw operating point") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TreeTopology t({4, 3});
  for (int rep = 0; rep < 200; ++rep) {
    const AttackConfig c(t, {static_cast<long long>(eng() % 5), static_cast<long long>(eng() % 13)});
    const double pfa = u(eng) * 0.5;
    const double pd = pfa + u(eng) * (1.0 - pfa);
    const OperatingPoint op = make_operating_point(pd, pfa);
    for (int k = 1; k <= 2; ++k) {
      const LevelChannel ch = level_channel(c, FlipStrategy::honest(2), op, k);
      CHECK(ch.pi10 == doctest::Approx(pfa).epsilon(1e-14));
      CHECK(ch.pi11 == doctest::Approx(pd).epsilon(1e-14));
    }
  }
}

TEST_CASE("pi stays in range and separates below half coverage") {
  std::mt19937_64 eng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const TreeTopology t({8, 2});
  for (int rep = 0; rep < 500; ++rep) {
    const long long b1 = static_cast<long long>(eng() % 4);  // alpha_1 <= 3/8 < 1/2
    const AttackConfig c(t, {b1, 0});
    const Rational p10 = Rational(static_cast<long long>(eng() % 101), 100);
    const Rational p01 = Rational(static_cast<long long>(eng() % 101), 100);
    const FlipStrategy s = FlipStrategy::uniform(2, p10, p01);
    const double pfa = u(eng) * 0.6;
    const double pd = pfa + 1e-6 + u(eng) * (1.0 - pfa - 1e-6);
    const OperatingPoint op = make_operating_point(pd, pfa);
    const LevelChannel ch = level_channel(c, s, op, 2);
    CHECK(ch.pi10 >= 0.0);
    CHECK(ch.pi10 <= 1.0);
    CHECK(ch.pi11 >= 0.0);
    CHECK(ch.pi11 <= 1.0);
    CHECK(ch.pi11 > ch.pi10);  // t < 1/2 and informative sensor
  }
}
