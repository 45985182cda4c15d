#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgatk/dga.hpp"
#include "dgatk/homology.hpp"

namespace dgatk {

/// Free graded algebra on ordered generators, each differential involving only
/// earlier generators, with a comparison map into a target dga.
struct SemifreeDga {
  DgaPresentation presentation;  // no relations; generator stages are recorded
  std::shared_ptr<const TruncatedDga> target;
  std::vector<Vector> images;  // comparison map on generators
  int validity = 0;
  std::vector<std::string> notes;

  int stage_count() const;
  /// The presentation restricted to generators of stage <= s.
  DgaPresentation stage(int s) const;
  TruncatedDga realize(int N, const RealizeOptions& opt = {}) const;
  /// Comparison map Q_n -> target_n in the given realization of Q.
  Matrix comparison(const TruncatedDga& Q, int n) const;
  /// d^2 = 0 and the comparison map is a chain algebra map through degree N.
  std::string check(int N) const;
};

/// Kill-cycles replacement: greedy lifts of algebra generators of H_*(A) as
/// stage 1, then one stage per degree in which classes of the mapping cone are killed.
SemifreeDga semifree_replacement(const TruncatedDga& A, int N, const RealizeOptions& opt = {});

/// Action of basis element i of E_a on basis element j of M_m, in M_{a+m}.
using ModuleAction = std::function<Vector(int a, std::size_t i, int m, std::size_t j)>;

/// A left dg module over a dga E.
struct DgModule {
  std::shared_ptr<const TruncatedDga> base;
  ChainComplex complex;
  ModuleAction action;
  std::string name;

  const Ground& ground() const { return complex.ground; }
  std::size_t dim(int n) const { return complex.dim(n); }
  /// e·x; vectors of length 0 stand for zero outside the stored range.
  Vector act(int a, const Vector& e, int m, const Vector& x) const;
  /// Leibniz and associativity of the action, exhaustively on basis elements.
  std::string check() const;
};

/// E as a module over itself.
DgModule free_module(const TruncatedDga& E);
/// A group concentrated in one degree, with E_0 acting through the coefficient
/// of the unit and positive degrees acting by zero.
DgModule trivial_module(const TruncatedDga& E, std::vector<Integer> orders, int degree, const std::string& name = "M");

struct ModuleBasisElement {
  std::string name;
  int degree = 0;
  Vector d;      // in P_{degree-1}
  Vector image;  // in M_{degree}, empty when there is no target
};

/// A module free over E on basis elements listed with nondecreasing degree,
/// each differential involving only earlier ones.
class SemifreeModule {
public:
  std::shared_ptr<const TruncatedDga> base;
  std::shared_ptr<const DgModule> target;
  std::vector<ModuleBasisElement> basis;
  int validity = 0;

  SemifreeModule() = default;
  SemifreeModule(std::shared_ptr<const TruncatedDga> E, std::shared_ptr<const DgModule> M);

  const Ground& ground() const { return base->ground(); }
  std::size_t dim(int n) const;
  /// Position of the block E_{n-|b|}·b inside P_n.
  std::size_t offset(std::size_t b, int n) const;
  std::size_t add_basis(std::string name, int degree, Vector d, Vector image = {});

  Vector act(int a, const Vector& e, int n, const Vector& x) const;
  Vector d(int n, const Vector& x) const;
  Vector comparison(int n, const Vector& x) const;
  Vector reduce(int n, Vector x) const;
  ChainComplex complex(int lo, int hi) const;
  std::string label(int n, std::size_t i) const;
  /// The element e·b with e basis element i of E_{n-|b|}, as coordinates of P_n.
  Vector element(std::size_t b, int n, const Vector& e) const;
  /// d^2 = 0 and the comparison map is a chain map of modules through degree N.
  std::string check(int N) const;
  /// Viewed as a dg module, stored in degrees lo..hi.
  DgModule as_module(int lo, int hi) const;
};

/// Kill-cycles resolution, lowest degree first; exact through N-1.
SemifreeModule semifree_module_resolution(std::shared_ptr<const DgModule> M, int N);

/// Hom_E(P, M): degree k sends each basis element b to M_{|b|+k};
/// δf = d∘f - (-1)^k f∘d and f(c·x) = (-1)^{k|c|} c·f(x).
struct HomComplex {
  ChainComplex complex;  // homological degrees
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> layout;  // per degree: (basis element, offset)

  /// f(x) for f of degree k and x in P_n.
  Vector evaluate(const SemifreeModule& P, const DgModule& M, int k, const Vector& f, int n, const Vector& x) const;
  /// The coordinates of f from its values on basis elements (indexed like P.basis).
  Vector from_values(int k, const std::vector<Vector>& values) const;
  Vector value(int k, const Vector& f, std::size_t b) const;
};

HomComplex hom_complex(const SemifreeModule& P, const DgModule& M, int lo, int hi);

/// Hom_E(P_{<=K}, P) with composition; homology is trustworthy in degrees valid_lo..valid_hi.
struct EndomorphismDga {
  TruncatedDga dga;
  HomComplex hom;
  int valid_lo = 0;
  int valid_hi = 0;
  HomologyRing homology() const { return HomologyRing(dga, valid_lo, valid_hi); }
};

/// Endomorphisms in homological degrees -K-1..hi, using source basis elements of degree <= K.
/// Needs P resolved through K+hi+1; `top` is the highest degree of the resolved module.
EndomorphismDga endomorphism_dga(std::shared_ptr<const SemifreeModule> P, int K, int hi, int top);

/// ℤ[ε]/(ε²) with dε = p, |ε| = 1: a degreewise free model of ℤ/p.
TruncatedDga koszul_model(long p, int N);

struct DerivedTensor {
  HomologyRing ring;
  TruncatedDga product;
  std::string path;  // "left factor free", "right factor free", "resolved left factor"
  int validity = 0;
};

/// A ⊗^L B through degree N.
DerivedTensor derived_tensor(const TruncatedDga& A, const TruncatedDga& B, int N, const RealizeOptions& opt = {});
bool degreewise_free(const TruncatedDga& A);

struct Distinction {
  bool distinguished = false;
  std::string kind;     // "groups", "ring", "derived mod p ring"
  std::string witness;  // first difference found
  int checked_through = 0;
  std::string verdict() const {
    return distinguished ? "not quasi-isomorphic" : "no obstruction found through degree " + std::to_string(checked_through);
  }
};

/// Compares homology groups, homology ring fingerprints and derived mod-p fingerprints.
Distinction distinguish(const TruncatedDga& A, const TruncatedDga& B, int N, const RealizeOptions& opt = {});

}  // namespace dgatk
