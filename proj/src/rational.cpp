#include "byztree/rational.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace byztree {

namespace {

using int128 = __int128;

long long narrow(int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  return static_cast<long long>(v);
}

int128 gcd128(int128 a, int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  int128 n = num;
  int128 d = den;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
}

Rational Rational::from_double(double x, long long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational from non-finite double");
  if (max_den < 1) throw std::invalid_argument("max_den must be >= 1");
  const bool neg = x < 0;
  double v = std::fabs(x);
  // continued fraction convergents p/q
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    double a_floor = std::floor(frac);
    if (a_floor > static_cast<double>(INT64_MAX) / 2) break;
    long long a = static_cast<long long>(a_floor);
    int128 p2 = static_cast<int128>(a) * p1 + p0;
    int128 q2 = static_cast<int128>(a) * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = narrow(p2);
    q1 = narrow(q2);
    if (std::fabs(v - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-15 * std::max(1.0, v)) break;
    double rem = frac - a_floor;
    if (rem < 1e-18) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) throw std::overflow_error("rational approximation failed");
  return Rational(neg ? -p1 : p1, q1);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<int128>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
  int128 n = static_cast<int128>(num_) * rhs.den_ + static_cast<int128>(rhs.num_) * den_;
  int128 d = static_cast<int128>(den_) * rhs.den_;
  int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
  int128 n = static_cast<int128>(num_) * rhs.num_;
  int128 d = static_cast<int128>(den_) * rhs.den_;
  int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  num_ = narrow(n);
  den_ = narrow(d);
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.num_ == 0) throw std::domain_error("rational division by zero");
  Rational inv;
  if (rhs.num_ < 0) {
    inv.num_ = narrow(-static_cast<int128>(rhs.den_));
    inv.den_ = narrow(-static_cast<int128>(rhs.num_));
  } else {
    inv.num_ = rhs.den_;
    inv.den_ = rhs.num_;
  }
  return *this *= inv;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

long long floor_quotient(const Rational& a, const Rational& b) {
  if (!(b > Rational(0))) throw std::domain_error("floor_quotient requires positive divisor");
  __int128 n = static_cast<__int128>(a.num()) * b.den();
  __int128 d = static_cast<__int128>(a.den()) * b.num();
  __int128 q = n / d;
  if (q * d > n) --q;  // toward -infinity
  if (q > INT64_MAX || q < INT64_MIN) throw std::overflow_error("floor_quotient overflow");
  return static_cast<long long>(q);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  os << r.num();
  if (r.den() != 1) os << '/' << r.den();
  return os;
}

}  // namespace byztree
