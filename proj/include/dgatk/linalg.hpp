#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "dgatk/ground.hpp"
#include "dgatk/matrix.hpp"

namespace dgatk {

/// U * M * V = D with U, V invertible over the ground ring and D diagonal
/// with d_1 | d_2 | ... (over a field every nonzero d_i is 1).
struct SmithForm {
  Matrix U;
  Matrix V;
  Matrix Uinv;
  std::vector<Integer> diagonal;  // the nonzero diagonal entries, length == rank
  std::size_t rank = 0;

  Matrix D(std::size_t rows, std::size_t cols) const;
};

enum SmithTransforms : unsigned {
  kSmithNone = 0,
  kSmithU = 1,
  kSmithV = 2,
  kSmithUinv = 4,
  kSmithAll = 7,
};

/// Pivot rule: smallest nonzero absolute value, ties to the lowest (row, col).
SmithForm smith_normal_form(const Matrix& M, const Ground& g = Ground::integers(), unsigned transforms = kSmithAll);

/// The module (ground^generators) / (column span of relations), in normal form.
struct QuotientStructure {
  Ground ground;
  std::size_t generators = 0;
  /// One entry per cyclic summand; 0 denotes a free summand (over F_p: a copy of F_p).
  std::vector<Integer> factors;
  Matrix projection;  // factors.size() x generators
  Matrix lift;        // generators x factors.size()

  std::size_t size() const { return factors.size(); }
  bool is_zero() const { return factors.empty(); }
  bool is_finite() const;
  /// Number of elements; nullopt when infinite.
  std::optional<Integer> order() const;
  /// Coordinates of the class of x, each reduced into [0, factor).
  Vector project(const Vector& x) const;
  Vector lift_vector(const Vector& q) const;
  Vector reduce(Vector q) const;
  /// Generator of the i-th cyclic summand expressed in ambient coordinates.
  Vector lift_generator(std::size_t i) const { return lift.column(i); }
};

QuotientStructure quotient_structure(std::size_t ngens, const Matrix& relations, const Ground& g = Ground::integers());

/// Solves A x = b over the ground ring using a cached normal form of A.
class LinearSolver {
public:
  LinearSolver() = default;
  LinearSolver(const Matrix& A, const Ground& g);

  std::optional<Vector> solve(const Vector& b) const;
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t rank() const { return snf_.rank; }
  /// Lattice basis of ker A.
  std::vector<Vector> kernel() const;

private:
  Ground ground_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  SmithForm snf_;
};

std::optional<Vector> solve(const Matrix& A, const Vector& b, const Ground& g = Ground::integers());
std::vector<Vector> kernel_basis(const Matrix& A, const Ground& g = Ground::integers());
/// A basis of the submodule spanned by the columns of G (a lattice basis over Z).
Matrix span_basis(const Matrix& G, const Ground& g = Ground::integers());

/// Canonical reduction modulo a lattice: echelon basis with pivots taken from
/// the last coordinate upwards, so reduced vectors prefer early coordinates.
class LatticeReducer {
public:
  LatticeReducer() = default;
  LatticeReducer(const Matrix& generators, const Ground& g);

  /// Unique representative of x + lattice with pivot entries in [0, pivot).
  Vector reduce(Vector x) const;
  bool contains(const Vector& x) const { return is_zero(reduce(x)); }
  std::size_t rank() const { return pivots_.size(); }

private:
  Ground ground_;
  std::size_t dim_ = 0;
  std::vector<std::pair<std::size_t, Vector>> pivots_;  // descending pivot row
};

/// Z / B where Z = { x : out_map x lies in span(out_relations) } and B is
/// spanned by `boundaries` (which must lie in Z). Homology of a complex of
/// finitely presented modules at one spot.
class Subquotient {
public:
  Subquotient() = default;
  Subquotient(std::size_t ambient, const Matrix& out_map, const Matrix& out_relations, const Matrix& boundaries,
              const Ground& g);

  const QuotientStructure& structure() const { return structure_; }
  const Matrix& cycle_basis() const { return cycle_basis_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t size() const { return structure_.size(); }
  const std::vector<Integer>& factors() const { return structure_.factors; }
  /// Ambient representative of the i-th summand generator.
  Vector representative(std::size_t i) const;
  /// Class coordinates of a cycle; nullopt when x is not a cycle.
  std::optional<Vector> classify(const Vector& x) const;

private:
  std::size_t ambient_ = 0;
  Ground ground_;
  Matrix cycle_basis_;
  std::shared_ptr<const LinearSolver> coords_;
  QuotientStructure structure_;
};

}  // namespace dgatk
