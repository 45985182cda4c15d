#include "dgatk/integer.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace dgatk {

namespace {

mpz_class mpz_from_i64(int64_t v) {
  mpz_class r;
  // mpz_set_si takes long; long is 64-bit on the supported platforms.
  static_assert(sizeof(long) == 8, "long must be 64 bits");
  mpz_set_si(r.get_mpz_t(), static_cast<long>(v));
  return r;
}

}  // namespace

Integer::Integer(std::string_view decimal) {
  mpz_class v;
  if (v.set_str(std::string(decimal), 10) != 0)
    throw std::invalid_argument("not an integer: " + std::string(decimal));
  assign_big(v);
}

mpz_class Integer::to_mpz() const { return big_ ? *big_ : mpz_from_i64(small_); }

void Integer::assign_big(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) {
    small_ = mpz_get_si(v.get_mpz_t());
    big_.reset();
  } else {
    small_ = 0;
    big_ = std::make_unique<mpz_class>(v);
  }
}

bool Integer::fits_long() const { return !big_; }
long Integer::to_long() const { return static_cast<long>(small_); }

int Integer::sign() const {
  if (big_) return sgn(*big_);
  return (small_ > 0) - (small_ < 0);
}

Integer Integer::operator-() const {
  if (!big_ && small_ != std::numeric_limits<int64_t>::min()) return Integer(static_cast<long long>(-small_));
  Integer r;
  r.assign_big(-to_mpz());
  return r;
}

Integer& Integer::operator+=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_add_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  assign_big(to_mpz() + o.to_mpz());
  return *this;
}

Integer& Integer::operator-=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_sub_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  assign_big(to_mpz() - o.to_mpz());
  return *this;
}

Integer& Integer::operator*=(const Integer& o) {
  if (!big_ && !o.big_) {
    int64_t r;
    if (!__builtin_mul_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
  }
  assign_big(to_mpz() * o.to_mpz());
  return *this;
}

bool operator==(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical form: a big value never fits in int64
}

int Integer::compare(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) return (a.small_ > b.small_) - (a.small_ < b.small_);
  return cmp(a.to_mpz(), b.to_mpz());
}

int Integer::compare_abs(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    // |INT64_MIN| does not fit; compare as unsigned magnitudes.
    auto mag = [](int64_t v) { return v < 0 ? static_cast<uint64_t>(0) - static_cast<uint64_t>(v) : static_cast<uint64_t>(v); };
    uint64_t x = mag(a.small_), y = mag(b.small_);
    return (x > y) - (x < y);
  }
  mpz_class x = a.to_mpz(), y = b.to_mpz();
  int c = mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t());
  return (c > 0) - (c < 0);
}

std::string Integer::str() const { return big_ ? big_->get_str() : std::to_string(small_); }

std::size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>{}(small_);
  return std::hash<std::string>{}(big_->get_str(16));
}

std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.str(); }

Integer abs(const Integer& v) { return v.sign() < 0 ? -v : v; }

Integer floor_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small() && !(a.small_value() == std::numeric_limits<int64_t>::min() && b.small_value() == -1)) {
    int64_t x = a.small_value(), y = b.small_value();
    int64_t q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
    return Integer(static_cast<long long>(q));
  }
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

Integer floor_mod(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  Integer m = abs(b);
  if (a.is_small() && m.is_small()) {
    int64_t x = a.small_value(), y = m.small_value();
    int64_t r = x % y;
    if (r < 0) r += y;
    return Integer(static_cast<long long>(r));
  }
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.to_mpz().get_mpz_t(), m.to_mpz().get_mpz_t());
  return Integer(r);
}

Integer exact_div(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (a.is_small() && b.is_small() && b.small_value() != -1) return Integer(static_cast<long long>(a.small_value() / b.small_value()));
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(q);
}

bool divides(const Integer& d, const Integer& a) {
  if (d.is_zero()) return a.is_zero();
  return floor_mod(a, d).is_zero();
}

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small()) {
    uint64_t x = a.small_value() < 0 ? 0 - static_cast<uint64_t>(a.small_value()) : static_cast<uint64_t>(a.small_value());
    uint64_t y = b.small_value() < 0 ? 0 - static_cast<uint64_t>(b.small_value()) : static_cast<uint64_t>(b.small_value());
    while (y) {
      uint64_t t = x % y;
      x = y;
      y = t;
    }
    if (x <= static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& s, Integer& t) {
  mpz_class G, S, T;
  mpz_gcdext(G.get_mpz_t(), S.get_mpz_t(), T.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  g = Integer(G);
  s = Integer(S);
  t = Integer(T);
}

Integer pow(const Integer& base, unsigned exp) {
  Integer r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace dgatk
