#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "byztree/stats.hpp"

using namespace byztree;

TEST_CASE("normal cdf and tail reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_tail(1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-13));
  CHECK(normal_tail(-1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-13));
  CHECK(normal_tail(2.0) == doctest::Approx(0.022750131948179195).epsilon(1e-13));
  CHECK(normal_tail(0.5) == doctest::Approx(0.3085375387259869).epsilon(1e-13));
}

TEST_CASE("normal quantile reference values") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(normal_quantile(0.999) == doctest::Approx(3.090232306167813).epsilon(1e-12));
  CHECK(normal_tail_quantile(0.01) == doctest::Approx(2.3263478740408408).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("quantile inverts the cdf") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(1e-10, 1.0 - 1e-10);
  for (int i = 0; i < 500; ++i) {
    const double p = u(eng);
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("binomial reference values") {
  CHECK(binomial_pmf(10, 0.3, 4) == doctest::Approx(0.2001209489999999).epsilon(1e-12));
  CHECK(binomial_cdf(25, 0.26, 11) == doctest::Approx(0.9852289909760484).epsilon(1e-12));
  CHECK(binomial_tail(25, 0.74, 11) == doctest::Approx(0.9986100106976247).epsilon(1e-12));
  CHECK(binomial_cdf(50, 0.9, 40) == doctest::Approx(0.02453793570459139).epsilon(1e-12));
  CHECK(binomial_tail(7, 0.5, 3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("binomial edge cases") {
  CHECK(binomial_pmf(10, 0.0, 0) == 1.0);
  CHECK(binomial_pmf(10, 1.0, 10) == 1.0);
  CHECK(binomial_cdf(10, 0.4, -1) == 0.0);
  CHECK(binomial_cdf(10, 0.4, 10) == 1.0);
  CHECK(binomial_tail(10, 0.4, 10) == 0.0);
  CHECK(binomial_tail(10, 0.4, -1) == 1.0);
  CHECK(binomial_tail(0, 0.4, 0) == 0.0);  // empty window never exceeds a threshold
}

TEST_CASE("binomial pmf sums to one and cdf+tail partition") {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_int_distribution<int> nn(1, 200);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = nn(eng);
    const double p = u(eng);
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) sum += binomial_pmf(n, p, k);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    const int cut = static_cast<int>(eng() % (n + 1));
    CHECK(binomial_cdf(n, p, cut) + binomial_tail(n, p, cut) == doctest::Approx(1.0).epsilon(1e-10));
  }
}
