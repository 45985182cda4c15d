#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dgatk {

/// Arbitrary-precision integer with an inline 64-bit fast path.
///
/// Values that fit in int64_t never touch GMP; arithmetic that overflows
/// promotes transparently, and results that fit again are demoted.
class Integer {
public:
  Integer() = default;
  Integer(int v) : small_(v) {}
  Integer(long v) : small_(v) {}
  Integer(long long v) : small_(v) {}
  explicit Integer(const mpz_class& v) { assign_big(v); }
  explicit Integer(std::string_view decimal);

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<mpz_class>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<mpz_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  bool is_small() const { return !big_; }
  int64_t small_value() const { return small_; }
  mpz_class to_mpz() const;
  bool fits_long() const;
  long to_long() const;  // caller checks fits_long()

  int sign() const;
  bool is_zero() const { return !big_ && small_ == 0; }
  bool is_one() const { return !big_ && small_ == 1; }

  Integer operator-() const;
  Integer& operator+=(const Integer& o);
  Integer& operator-=(const Integer& o);
  Integer& operator*=(const Integer& o);

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }

  friend bool operator==(const Integer& a, const Integer& b);
  friend bool operator!=(const Integer& a, const Integer& b) { return !(a == b); }
  friend bool operator<(const Integer& a, const Integer& b) { return compare(a, b) < 0; }
  friend bool operator>(const Integer& a, const Integer& b) { return compare(a, b) > 0; }
  friend bool operator<=(const Integer& a, const Integer& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const Integer& a, const Integer& b) { return compare(a, b) >= 0; }
  static int compare(const Integer& a, const Integer& b);
  static int compare_abs(const Integer& a, const Integer& b);

  std::string str() const;
  std::size_t hash() const;

private:
  void assign_big(const mpz_class& v);  // demotes when it fits
  int64_t small_ = 0;
  std::unique_ptr<mpz_class> big_;
};

std::ostream& operator<<(std::ostream& os, const Integer& v);

Integer abs(const Integer& v);
/// Floor division and the matching non-negative-divisor remainder.
Integer floor_div(const Integer& a, const Integer& b);
Integer floor_mod(const Integer& a, const Integer& b);
/// Exact division; b must divide a.
Integer exact_div(const Integer& a, const Integer& b);
bool divides(const Integer& d, const Integer& a);
Integer gcd(const Integer& a, const Integer& b);
/// Extended gcd: g = s*a + t*b with g >= 0.
void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t);
Integer pow(const Integer& base, unsigned exp);
bool is_prime(long n);

}  // namespace dgatk

template <>
struct std::hash<dgatk::Integer> {
  std::size_t operator()(const dgatk::Integer& v) const { return v.hash(); }
};
