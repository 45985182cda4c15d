#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgatk/complex.hpp"
#include "dgatk/dga.hpp"

namespace dgatk {

/// H_i for i in the valid range of the dga up to N-1 (degree N needs boundaries from N+1).
GradedGroup homology(const ChainComplex& c, int N);
GradedGroup homology(const TruncatedDga& A, int N);

/// Homology groups of a dga with the induced product on class coordinates.
class HomologyRing {
public:
  HomologyRing() = default;
  HomologyRing(const TruncatedDga& A, int lo, int hi);

  const GradedGroup& groups() const { return groups_; }
  const TruncatedDga& dga() const { return *dga_; }
  const Ground& ground() const { return groups_.ground(); }
  int lo() const { return groups_.lo(); }
  int hi() const { return groups_.hi(); }
  std::size_t size(int n) const { return groups_.size(n); }
  std::vector<Integer> factors(int n) const { return groups_.factors(n); }
  bool defined(int a, int b) const { return groups_.in_range(a) && groups_.in_range(b) && groups_.in_range(a + b); }

  /// Product of summand generators, in class coordinates of degree a+b.
  const Vector& basis_product(int a, std::size_t i, int b, std::size_t j) const;
  Vector multiply(int a, const Vector& x, int b, const Vector& y) const;
  /// Class coordinates of the unit (degree 0).
  Vector unit() const;
  Vector reduce(int n, Vector v) const { return groups_.at(n).structure().reduce(std::move(v)); }
  /// All elements of degree n; empty optional when there are more than `limit`.
  std::optional<std::vector<Vector>> elements(int n, std::size_t limit) const;

private:
  std::shared_ptr<const TruncatedDga> dga_;
  GradedGroup groups_;
  mutable std::map<std::tuple<int, int, std::size_t, std::size_t>, Vector> cache_;
};

HomologyRing homology_ring(const TruncatedDga& A, int N);

/// Isomorphism invariants of a homology ring.
struct RingFingerprint {
  Ground ground;
  int lo = 0;
  int hi = -1;
  std::map<int, std::vector<Integer>> factors;
  /// Every degree-1 element squares to zero (vacuously true when H_1 = 0).
  std::optional<bool> degree1_squares_zero;
  /// Invariant factors of the image of H_a x H_b -> H_{a+b}, 0 < a <= b.
  std::map<std::pair<int, int>, std::vector<Integer>> product_images;
  /// Invariant factors of H_{a+b} modulo that image.
  std::map<std::pair<int, int>, std::vector<Integer>> product_cokernels;
  /// Largest nilpotency index of an element per degree; -1 if undetermined in range.
  std::map<int, int> max_nilpotency;

  /// Text describing the first invariant that differs, or nullopt if all agree.
  std::optional<std::pair<std::string, std::string>> compare(const RingFingerprint& o) const;
};

RingFingerprint ring_fingerprint(const HomologyRing& R, std::size_t enumeration_limit = 4096);

/// Invariant factors of the subgroup of degree n spanned by `columns` (class coordinates).
std::vector<Integer> subgroup_factors(const HomologyRing& R, int n, const std::vector<Vector>& columns);
/// Invariant factors of the quotient of degree n by that subgroup.
std::vector<Integer> cokernel_factors(const HomologyRing& R, int n, const std::vector<Vector>& columns);

}  // namespace dgatk
