#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace byztree {

// Exact rational on int64 with __int128 intermediates. Always canonical:
// denominator > 0, gcd(|num|, den) == 1. Arithmetic throws std::overflow_error
// if a result does not fit int64 after reduction. The blinding boundary
// (sum alpha_j = 1/2) must be testable exactly, which is the whole reason this
// type exists.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(long long value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(long long num, long long den);

  // Best rational approximation of x with denominator <= max_den
  // (continued-fraction expansion). Recovers short decimals exactly,
  // e.g. from_double(0.35) == 7/20.
  static Rational from_double(double x, long long max_den = 1000000);

  long long num() const { return num_; }
  long long den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_integer() const { return den_ == 1; }
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  long long num_;
  long long den_;
};

// floor(a / b) for b > 0, exact. Used by the knapsack-style budget cascades.
long long floor_quotient(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace byztree
