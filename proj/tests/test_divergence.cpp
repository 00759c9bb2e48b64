#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "byztree/divergence.hpp"
#include "byztree/stats.hpp"

using namespace byztree;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LevelChannel channel(double pi10, double pi11) {
  return LevelChannel{pi10, pi11, 0.0, 0.0};
}

// closed-form dD/dx_k from the monotonicity analysis:
//   N_k (1 - beta01 - beta10) ((1-pi10)/(1-pi11) - pi10/pi11)
double derivative_oracle(long long n_k, const LevelChannel& ch) {
  return static_cast<double>(n_k) * (1.0 - ch.beta01 - ch.beta10) *
         ((1.0 - ch.pi10) / (1.0 - ch.pi11) - ch.pi10 / ch.pi11);
}

}  // namespace

TEST_CASE("level kld reference values") {
  CHECK(level_kld(channel(0.2, 0.8)) == doctest::Approx(0.8317766166719344).epsilon(1e-14));
  CHECK(level_kld(channel(0.5, 0.5)) == 0.0);
  CHECK(level_kld(channel(0.44, 0.56)) == doctest::Approx(0.028939446818026564).epsilon(1e-14));
}

TEST_CASE("level kld boundary handling") {
  CHECK(level_kld(channel(0.2, 0.0)) == kInf);
  CHECK(level_kld(channel(0.2, 1.0)) == kInf);
  CHECK(level_kld(channel(0.0, 0.0)) == 0.0);
  CHECK(level_kld(channel(1.0, 1.0)) == 0.0);
  CHECK(level_kld(channel(0.0, 1.0)) == kInf);
  // H0 mass vanishing where H1 keeps mass stays finite (0 ln 0 = 0)
  CHECK(level_kld(channel(0.0, 0.3)) == doctest::Approx(-std::log(0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(level_kld(channel(-0.1, 0.5)), std::domain_error);
}

TEST_CASE("total kld additivity over the example tree") {
  const TreeTopology t({2, 3, 2});
  const AttackConfig none(t, {0, 0, 0});
  const auto points = uniform_points(3, make_operating_point(0.8, 0.2));
  const KldReport report = total_kld(t, none, FlipStrategy::always_flip(3), points);
  CHECK(report.total == doctest::Approx(16.635532333438686).epsilon(1e-12));
  for (double dk : report.per_level) {
    CHECK(dk == doctest::Approx(0.8317766166719344).epsilon(1e-14));
  }
}

TEST_CASE("blinding configuration zeroes the kld exactly") {
  const TreeTopology t({6, 2});
  const AttackConfig blind(t, {3, 0});
  const auto points = uniform_points(2, make_operating_point(0.8, 0.2));
  const KldReport report = total_kld(t, blind, FlipStrategy::always_flip(2), points);
  CHECK(report.total == 0.0);  // exact, via the rational blinding test
  const AttackConfig fewer(t, {2, 0});
  CHECK(total_kld(t, fewer, FlipStrategy::always_flip(2), points).total > 0.0);
}

TEST_CASE("optimal attack strategy") {
  SUBCASE("below the boundary: always flip") {
    const FlipStrategy s = optimal_attack_strategy({Rational(2, 5)});
    CHECK(s.p10(1) == Rational(1));
    CHECK(s.p01(1) == Rational(1));
  }
  SUBCASE("exactly at the boundary: always flip and blinding") {
    const FlipStrategy s = optimal_attack_strategy({Rational(1, 2)});
    CHECK(s.p10(1) == Rational(1));
    const TreeTopology t({2});
    CHECK(is_blinding(AttackConfig(t, {1}), s));
  }
  SUBCASE("two levels below the boundary") {
    const FlipStrategy s = optimal_attack_strategy({Rational(1, 4), Rational(9, 20)});
    for (int k = 1; k <= 2; ++k) {
      CHECK(s.p10(k) == Rational(1));
      CHECK(s.p01(k) == Rational(1));
    }
  }
  SUBCASE("odd minimal blinding count uses the scaled symmetric pair") {
    const TreeTopology t({5, 2});
    const AttackConfig c(t, {3, 0});  // alpha_1 = 3/5
    const FlipStrategy s = optimal_attack_strategy(coverage_fractions(t, c));
    CHECK(s.p10(1) == Rational(5, 6));  // (p10 + p01) = 1 / alpha_1
    CHECK(s.p01(1) == Rational(5, 6));
    CHECK(s.p10(2) == Rational(0));
    CHECK(is_blinding(c, s));
  }
  SUBCASE("rejects decreasing coverage") {
    CHECK_THROWS_AS(optimal_attack_strategy({Rational(1, 2), Rational(1, 4)}),
                    std::invalid_argument);
  }
}

TEST_CASE("grid oracle finds the always-flip optimum") {
  const TreeTopology t({5});
  const auto points = uniform_points(1, make_operating_point(0.8, 0.2));
  SUBCASE("coverage 0.4") {
    const GridMinResult r = grid_min_kld(t, AttackConfig(t, {2}), points, 51);
    CHECK(r.p10 == 1.0);
    CHECK(r.p01 == 1.0);
    CHECK(r.total / 5.0 == doctest::Approx(0.12 * std::log(0.56 / 0.44)).epsilon(1e-12));
  }
  SUBCASE("zero coverage: flat surface, ties resolve to (1,1)") {
    const GridMinResult r = grid_min_kld(t, AttackConfig(t, {0}), points, 21);
    CHECK(r.p10 == 1.0);
    CHECK(r.p01 == 1.0);
    CHECK(r.total / 5.0 == doctest::Approx(0.8317766166719344).epsilon(1e-12));
  }
  SUBCASE("blinding coverage reaches zero at (1,1)") {
    const TreeTopology t2({2});
    const GridMinResult r =
        grid_min_kld(t2, AttackConfig(t2, {1}), uniform_points(1, make_operating_point(0.8, 0.2)), 11);
    CHECK(r.p10 == 1.0);
    CHECK(r.p01 == 1.0);
    CHECK(r.total == doctest::Approx(0.0).epsilon(1e-15));
  }
}

TEST_CASE("grid argmin equals the closed-form optimum across coverages") {
  const auto points = uniform_points(1, make_operating_point(0.8, 0.2));
  const TreeTopology t({20});
  for (long long b = 1; b <= 9; ++b) {  // t = b/20 in {0.05, ..., 0.45}
    const GridMinResult r = grid_min_kld(t, AttackConfig(t, {b}), points, 21);
    CHECK(r.p10 == 1.0);
    CHECK(r.p01 == 1.0);
  }
}

TEST_CASE("kld versus coverage curve") {
  const OperatingPoint op = make_operating_point(0.8, 0.2);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.01 * i);
  const auto curve = kld_vs_coverage(op, grid);
  CHECK(curve.front().second == doctest::Approx(0.8317766166719344).epsilon(1e-12));
  CHECK(curve[40].second == doctest::Approx(0.028939446818026564).epsilon(1e-12));
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].second < curve[i - 1].second);  // strictly decreasing
  }
  for (std::size_t i = 1; i + 1 < curve.size(); ++i) {
    const double dd = curve[i + 1].second - 2.0 * curve[i].second + curve[i - 1].second;
    CHECK(dd >= -1e-9);  // convex up to tolerance
  }
  CHECK(kld_vs_coverage(op, {0.499}).front().second < 2e-5);
  CHECK_THROWS_AS(kld_vs_coverage(op, {0.5}), std::invalid_argument);
}

TEST_CASE("partial derivative with respect to detector separation") {
  const TreeTopology t({5});
  const AttackConfig c(t, {2});
  const FlipStrategy s = FlipStrategy::always_flip(1);
  SUBCASE("positive below the blinding region and matches the closed form") {
    auto points = uniform_points(1, make_operating_point(0.8, 0.2));
    const double fd = kld_partial_wrt_separation(t, c, s, points, 1, 1e-4);
    CHECK(fd > 0.0);
    const LevelChannel ch = level_channel(c, s, points[0], 1);
    CHECK(fd == doctest::Approx(derivative_oracle(5, ch)).epsilon(1e-6));
  }
  SUBCASE("blinding coverage annihilates the sensitivity") {
    const TreeTopology t2({2});
    const AttackConfig blind(t2, {1});
    auto points = uniform_points(1, make_operating_point(0.8, 0.2));
    CHECK(kld_partial_wrt_separation(t2, blind, s, points, 1, 1e-4) == 0.0);
  }
  SUBCASE("coverage past the boundary rejected") {
    const TreeTopology t3({4});
    const AttackConfig over(t3, {3});
    auto points = uniform_points(1, make_operating_point(0.8, 0.2));
    CHECK_THROWS_AS(kld_partial_wrt_separation(t3, over, s, points, 1, 1e-4),
                    std::invalid_argument);
  }
  SUBCASE("uninformative boundary uses a one-sided difference") {
    auto points = uniform_points(1, make_operating_point(0.2, 0.2));
    const double fd = kld_partial_wrt_separation(t, c, s, points, 1, 1e-4);
    CHECK(fd > 0.0);
    CHECK(total_kld(t, c, s, points).total == 0.0);
  }
  SUBCASE("step too large rejected") {
    auto points = uniform_points(1, make_operating_point(0.999, 0.2));
    CHECK_THROWS_AS(kld_partial_wrt_separation(t, c, s, points, 1, 1e-2),
                    std::invalid_argument);
  }
}

TEST_CASE("fusion weights") {
  const auto [a1, a0] = fusion_weights(channel(0.2, 0.8));
  CHECK(a1 == doctest::Approx(1.3862943611198906).epsilon(1e-14));
  CHECK(a0 == doctest::Approx(-1.3862943611198906).epsilon(1e-14));
  const auto [z1, z0] = fusion_weights(channel(0.5, 0.5));
  CHECK(z1 == 0.0);
  CHECK(z0 == 0.0);
  const auto [m1, m0] = fusion_weights(channel(0.44, 0.56));
  CHECK(m1 == doctest::Approx(0.24116205681688804).epsilon(1e-13));
  CHECK(m0 == doctest::Approx(-0.24116205681688804).epsilon(1e-13));
  const auto [i1, i0] = fusion_weights(channel(0.0, 0.3));
  CHECK(i1 == kInf);
  CHECK(std::isfinite(i0));
}

TEST_CASE("fusion weight signs follow the channel ordering") {
  std::mt19937_64 eng(11);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 300; ++i) {
    double p = u(eng), q = u(eng);
    if (p == q) continue;
    if (p > q) std::swap(p, q);
    const auto [a1, a0] = fusion_weights(channel(p, q));
    CHECK(a1 > 0.0);
    CHECK(a0 < 0.0);
  }
}

TEST_CASE("gaussian roc point") {
  SUBCASE("symmetric threshold") {
    const OperatingPoint op = gaussian_roc_point({2.0, 1.0});
    CHECK(op.p_false_alarm == doctest::Approx(0.15865525393145707).epsilon(1e-13));
    CHECK(op.p_detect == doctest::Approx(0.8413447460685429).epsilon(1e-13));
  }
  SUBCASE("extreme thresholds approach the roc endpoints") {
    const OperatingPoint hi = gaussian_roc_point({1.0, 1e12});
    CHECK(hi.p_false_alarm < 1e-6);
    CHECK(hi.p_detect < 1e-3);
    CHECK(hi.p_detect > hi.p_false_alarm);
    const OperatingPoint lo = gaussian_roc_point({1.0, 1e-12});
    CHECK(lo.p_detect > 1.0 - 1e-3);
    CHECK(lo.p_false_alarm > 1.0 - 1e-2);
  }
  SUBCASE("lambda sweep is monotone decreasing in both coordinates") {
    double prev_pfa = 1.1, prev_pd = 1.1;
    for (double lam : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
      const OperatingPoint op = gaussian_roc_point({1.5, lam});
      CHECK(op.p_false_alarm < prev_pfa);
      CHECK(op.p_detect < prev_pd);
      prev_pfa = op.p_false_alarm;
      prev_pd = op.p_detect;
    }
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(gaussian_roc_point({2.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_roc_point({2.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_roc_point({0.0, 1.0}), std::invalid_argument);
  }
  SUBCASE("threshold_for_pfa inverts the sweep") {
    for (double target : {0.05, 0.2, 0.5, 0.9}) {
      const double lam = gaussian_threshold_for_pfa(1.3, target);
      const OperatingPoint op = gaussian_roc_point({1.3, lam});
      CHECK(op.p_false_alarm == doctest::Approx(target).epsilon(1e-10));
      CHECK(op.p_detect ==
            doctest::Approx(normal_tail(normal_tail_quantile(target) - 1.3)).epsilon(1e-10));
    }
  }
}

TEST_CASE("asymmetric deviations always increase the kld") {
  // any (p, p-eps) or (p-eps, p) strictly exceeds the symmetric (p, p)
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 400; ++i) {
    const double p = 0.05 + 0.95 * u(eng);
    const double eps = p * (0.05 + 0.95 * u(eng));
    const double t = 0.02 + 0.45 * u(eng);
    const double pfa = 0.05 + 0.4 * u(eng);
    const double pd = pfa + 0.05 + (0.95 - pfa - 0.05) * u(eng);
    const OperatingPoint op = make_operating_point(pd, pfa);
    const double sym = level_kld(channel_from_coverage(t, p, p, op));
    const double dev1 = level_kld(channel_from_coverage(t, p, p - eps, op));
    const double dev2 = level_kld(channel_from_coverage(t, p - eps, p, op));
    CHECK(dev1 > sym + 1e-12);
    CHECK(dev2 > sym + 1e-12);
  }
}

TEST_CASE("symmetric flipping is monotone decreasing in p below blinding") {
  std::mt19937_64 eng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    const double t = 0.02 + 0.45 * u(eng);
    const double pfa = 0.05 + 0.4 * u(eng);
    const double pd = pfa + 0.1 + (0.9 - pfa - 0.1) * u(eng);
    const OperatingPoint op = make_operating_point(pd, pfa);
    double prev = level_kld(channel_from_coverage(t, 0.0, 0.0, op));
    for (int i = 1; i <= 100; ++i) {
      const double p = i / 100.0;
      const double cur = level_kld(channel_from_coverage(t, p, p, op));
      CHECK(cur < prev);
      prev = cur;
    }
  }
}
