#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "dgatk/complex.hpp"
#include "dgatk/presentation.hpp"

namespace dgatk {

/// Product of basis element i in degree a with basis element j in degree b,
/// as (unreduced) coordinates in degree a + b.
using BasisProduct = std::function<Vector(int a, std::size_t i, int b, std::size_t j)>;

/// Monomial data kept when a dga is realized from a presentation.
struct MonomialBasis {
  DgaPresentation presentation;
  std::vector<std::vector<Word>> words;                 // per degree, in monomial order
  std::vector<std::map<Word, std::size_t, WordLess>> index;
  std::vector<QuotientStructure> quotient;              // words modulo the ideal
  std::vector<LatticeReducer> ideal;

  /// Coordinates of a homogeneous polynomial of degree n in the quotient basis.
  Vector project(int n, const Polynomial& p) const;
  /// Monomial combination representing the quotient vector v.
  Polynomial lift(int n, const Vector& v) const;
  bool in_ideal(int n, const Polynomial& p) const;
};

/// A dga known in degrees lo..hi (hi is the validity degree).
class TruncatedDga {
public:
  ChainComplex complex;
  Vector unit;  // coordinates in degree 0
  std::shared_ptr<const MonomialBasis> monomials;  // set when realized from a presentation
  std::string name;

  TruncatedDga() = default;
  TruncatedDga(ChainComplex c, BasisProduct product, Vector unit);

  const Ground& ground() const { return complex.ground; }
  int lo() const { return complex.lo; }
  int top() const { return complex.hi; }
  std::size_t dim(int n) const { return complex.dim(n); }
  bool defined(int a, int b) const { return complex.in_range(a) && complex.in_range(b) && complex.in_range(a + b); }

  /// Reduced product of basis elements.
  const Vector& basis_product(int a, std::size_t i, int b, std::size_t j) const;
  Vector multiply(int a, const Vector& x, int b, const Vector& y) const;
  Vector d(int n, const Vector& x) const { return complex.apply_d(n, x); }
  /// Rebuilds this dga with the same data restricted to degrees lo..n.
  TruncatedDga truncated(int n) const;
  const BasisProduct& raw_product() const { return product_; }
  std::string label(int n, std::size_t i) const;

  /// Exhaustive checks of the dga axioms; empty string when all hold.
  std::string check_leibniz() const;
  std::string check_associativity() const;
  std::string check_unit() const;

private:
  struct Cache {
    std::recursive_mutex lock;
    std::map<std::tuple<int, int>, std::vector<std::optional<Vector>>> table;
  };
  BasisProduct product_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

struct RealizeOptions {
  std::size_t monomial_cap = 20000;
  bool verify = true;
};

/// Degreewise quotient of the free algebra by the two-sided ideal of relations.
TruncatedDga realize(const DgaPresentation& p, int N, const RealizeOptions& opt = {});

struct ValidationIssue {
  std::string kind;
  std::string message;
  std::string witness;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  int checked_through = 0;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const DgaPresentation& p, int N, std::size_t monomial_cap = 20000);

/// Enumerates the monomials of each degree 0..N in monomial order.
std::vector<std::vector<Word>> enumerate_words(const DgaPresentation& p, int N, std::size_t cap);

/// (a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb', d(a⊗b) = da⊗b + (-1)^{|a|} a⊗db.
TruncatedDga tensor_dga(const TruncatedDga& A, const TruncatedDga& B, int N);
/// a ·op b = (-1)^{|a||b|} b·a.
TruncatedDga opposite(const TruncatedDga& A);
/// Degrees < n unchanged, C_n / im(C_{n+1}) in degree n, zero above.
TruncatedDga brutal_truncation(const TruncatedDga& A, int n);

/// Elementwise checks that the structure constants of two dgas agree.
bool same_structure(const TruncatedDga& A, const TruncatedDga& B);

}  // namespace dgatk
