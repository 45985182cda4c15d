#include "dgatk/ground.hpp"

#include <stdexcept>

namespace dgatk {

Ground Ground::prime_field(long p) {
  if (!is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not prime");
  return Ground{Kind::PrimeField, p};
}

bool Ground::is_unit(const Integer& v) const {
  if (is_field()) return !normalize(v).is_zero();
  return v == Integer(1) || v == Integer(-1);
}

Integer Ground::inverse(const Integer& v) const {
  if (!is_field()) {
    if (!is_unit(v)) throw std::domain_error("not a unit in Z: " + v.str());
    return v;
  }
  Integer g, s, t;
  xgcd(normalize(v), Integer(p), g, s, t);
  if (!g.is_one()) throw std::domain_error("not invertible mod " + std::to_string(p));
  return normalize(s);
}

}  // namespace dgatk
