#pragma once

namespace byztree {

// Standard normal CDF Phi(x).
double normal_cdf(double x);

// Upper tail Q(x) = 1 - Phi(x).
double normal_tail(double x);

// Phi^{-1}(p) for p in (0,1). Acklam's rational approximation refined with one
// Halley step against erfc; absolute error below 1e-13 over the open interval.
double normal_quantile(double p);

// Q^{-1}(p) = Phi^{-1}(1-p).
double normal_tail_quantile(double p);

// Binomial(n, p) point mass at k; 0 outside [0, n].
double binomial_pmf(int n, double p, int k);

// P[X <= k] by direct summation of the shorter side (all-positive terms, no
// cancellation). n is expected to stay desk-scale (<= a few thousand).
double binomial_cdf(int n, double p, int k);

// P[X > k].
double binomial_tail(int n, double p, int k);

}  // namespace byztree
