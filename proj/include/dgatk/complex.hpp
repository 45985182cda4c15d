#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgatk/linalg.hpp"

namespace dgatk {

/// One degree of a graded group: a direct sum of cyclic groups.
/// Order 0 is a free summand (over F_p every summand has order 0).
struct CyclicSum {
  std::vector<Integer> orders;
  std::vector<std::string> labels;

  std::size_t size() const { return orders.size(); }
  /// Columns order_i * e_i for the torsion summands.
  Matrix relations() const;
  Vector reduce(Vector v, const Ground& g) const;
};

/// A chain complex of finitely generated groups stored in degrees lo..hi,
/// with d_n : C_n -> C_{n-1}.
class ChainComplex {
public:
  Ground ground;
  int lo = 0;
  int hi = -1;
  bool zero_below = true;   // C_{lo-1} = 0
  bool zero_above = false;  // C_{hi+1} = 0
  std::vector<CyclicSum> groups;
  std::vector<Matrix> diffs;  // diffs[n - lo] is d_n; d_lo has 0 rows

  ChainComplex() = default;
  ChainComplex(const Ground& g, int lo, int hi);

  bool in_range(int n) const { return n >= lo && n <= hi; }
  std::size_t dim(int n) const { return in_range(n) ? groups[static_cast<std::size_t>(n - lo)].size() : 0; }
  const CyclicSum& group(int n) const { return groups.at(static_cast<std::size_t>(n - lo)); }
  CyclicSum& group(int n) { return groups.at(static_cast<std::size_t>(n - lo)); }
  /// d_n as a dim(n-1) x dim(n) matrix (zero outside the stored range).
  Matrix d(int n) const;
  void set_d(int n, Matrix m);
  Vector reduce(int n, Vector v) const;
  Vector apply_d(int n, const Vector& v) const;

  /// Degrees in which homology is determined by the stored data.
  int homology_lo() const { return zero_below ? lo : lo + 1; }
  int homology_hi() const { return zero_above ? hi : hi - 1; }

  /// Checks d_{n-1} d_n = 0 modulo the torsion of C_{n-2}.
  bool is_complex(std::string* witness = nullptr) const;
};

/// Homology in a range of degrees with canonical representatives.
class GradedGroup {
public:
  GradedGroup() = default;
  GradedGroup(const ChainComplex& c, int lo, int hi);

  const Ground& ground() const { return ground_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool in_range(int n) const { return n >= lo_ && n <= hi_; }
  const Subquotient& at(int n) const { return degrees_.at(static_cast<std::size_t>(n - lo_)); }
  std::vector<Integer> factors(int n) const { return at(n).factors(); }
  std::size_t size(int n) const { return in_range(n) ? at(n).size() : 0; }
  /// Canonical cycle representing the i-th summand generator in degree n.
  const Vector& representative(int n, std::size_t i) const;
  /// Canonical cycle representative of the class with coordinates q.
  Vector representative_of(int n, const Vector& q) const;
  std::optional<Vector> classify(int n, const Vector& cycle) const;
  /// Same isomorphism type in every common degree.
  bool same_groups(const GradedGroup& o, int* first_difference = nullptr) const;

private:
  Ground ground_;
  int lo_ = 0;
  int hi_ = -1;
  std::vector<Subquotient> degrees_;
  std::vector<LatticeReducer> boundaries_;
  std::vector<std::vector<Vector>> reps_;
  std::vector<std::vector<int>> signs_;  // -1 where the summand generator was negated
};

/// Human-readable group name such as "Z/2 + Z" or "0".
std::string group_name(const std::vector<Integer>& factors, const Ground& g);

}  // namespace dgatk
