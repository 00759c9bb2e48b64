#include "byztree/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace byztree {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Peter Acklam's inverse normal CDF approximation (2003), max relative error
// ~1.15e-9, then one Halley refinement through erfc.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile requires p in (0,1)");

  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  // Halley step: e = Phi(x) - p
  double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

double normal_tail_quantile(double p) { return normal_quantile(1.0 - p); }

namespace {

double log_pmf(int n, double p, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

double binomial_pmf(int n, double p, int k) {
  if (n < 0) throw std::domain_error("binomial_pmf requires n >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_pmf requires p in [0,1]");
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_pmf(n, p, k));
}

double binomial_cdf(int n, double p, int k) {
  if (n < 0) throw std::domain_error("binomial_cdf requires n >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_cdf requires p in [0,1]");
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  // sum whichever side has fewer terms
  if (k + 1 <= n - k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += binomial_pmf(n, p, j);
    return s < 1.0 ? s : 1.0;
  }
  double s = 0.0;
  for (int j = k + 1; j <= n; ++j) s += binomial_pmf(n, p, j);
  double r = 1.0 - s;
  return r > 0.0 ? r : 0.0;
}

double binomial_tail(int n, double p, int k) {
  if (n < 0) throw std::domain_error("binomial_tail requires n >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial_tail requires p in [0,1]");
  if (k < 0) return 1.0;
  if (k >= n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  if (n - k <= k + 1) {
    double s = 0.0;
    for (int j = k + 1; j <= n; ++j) s += binomial_pmf(n, p, j);
    return s < 1.0 ? s : 1.0;
  }
  double s = 0.0;
  for (int j = 0; j <= k; ++j) s += binomial_pmf(n, p, j);
  double r = 1.0 - s;
  return r > 0.0 ? r : 0.0;
}

}  // namespace byztree
