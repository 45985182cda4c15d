#pragma once

#include <string>

#include "dgatk/integer.hpp"

namespace dgatk {

/// The ground ring: either the integers or a prime field F_p.
struct Ground {
  enum class Kind { Integers, PrimeField };

  Kind kind = Kind::Integers;
  long p = 0;

  static Ground integers() { return {}; }
  static Ground prime_field(long p);

  bool is_field() const { return kind == Kind::PrimeField; }
  /// Canonical representative: identity over Z, [0, p) over F_p.
  Integer normalize(const Integer& v) const { return is_field() ? floor_mod(v, Integer(p)) : v; }
  bool is_unit(const Integer& v) const;
  /// Multiplicative inverse of a unit.
  Integer inverse(const Integer& v) const;
  std::string name() const { return is_field() ? "F" + std::to_string(p) : "Z"; }

  friend bool operator==(const Ground& a, const Ground& b) { return a.kind == b.kind && a.p == b.p; }
  friend bool operator!=(const Ground& a, const Ground& b) { return !(a == b); }
};

}  // namespace dgatk
