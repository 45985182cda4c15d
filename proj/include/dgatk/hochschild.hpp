#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgatk/postnikov.hpp"

namespace dgatk {

/// E = Q ⊗ Q^op with Q as a left E-module: (a⊗b)·x = (-1)^{|b||x|} a x b.
struct Enveloping {
  std::shared_ptr<const SemifreeDga> model;
  std::shared_ptr<const TruncatedDga> algebra;  // Q realized
  std::shared_ptr<const TruncatedDga> env;      // E
  std::shared_ptr<const DgModule> diagonal;     // Q over E
  int validity = 0;
  std::vector<std::size_t> order;  // generators of the model in degree order
  std::vector<std::vector<std::array<std::size_t, 4>>> keys;  // per degree of E: (a, i, b, j)
  std::vector<std::map<std::array<std::size_t, 4>, std::size_t>> positions;

  /// Index of a⊗b in E_{|a|+|b|} for basis elements of Q.
  std::optional<std::size_t> index(int a, std::size_t i, int b, std::size_t j) const;
  /// A basis word of the model as coordinates in its degree.
  Vector word(const Word& w) const;
  Vector left(int a, const Vector& x) const;   // x⊗1
  Vector right(int b, const Vector& y) const;  // 1⊗y
};

Enveloping enveloping(const SemifreeDga& Q, int N, const RealizeOptions& opt = {});

/// The kernel Ω of E -> Q, free on D(v) = v⊗1 - 1⊗v, with d D(v) = D(dv).
struct AugmentationKernel {
  std::vector<std::size_t> generators;  // Q generators in degree order
  /// D(dv) = Σ coefficient[w] D(w), coefficients in E_{|v|-1-|w|}; indexed like `generators`.
  std::vector<std::vector<Vector>> differential;
};

/// The universal derivation of a polynomial of degree n, as coefficients on the D(w).
std::vector<Vector> universal_derivation(const Enveloping& E, const Polynomial& p, int n);

struct HochschildResolution {
  Enveloping env;
  std::shared_ptr<const SemifreeModule> resolution;
  std::optional<AugmentationKernel> kernel;  // set for the small resolution
  std::string route;
};

/// Cone of Ω -> E: basis b0 and β_v = sD(v) with dβ_v = (v⊗1 - 1⊗v)b0 - Σ (-1)^{|c|} c β_w.
HochschildResolution small_resolution(const SemifreeDga& Q, int N, const RealizeOptions& opt = {});
/// Kill-cycles resolution of Q over E.
HochschildResolution kill_cycles_resolution(const SemifreeDga& Q, int N, const RealizeOptions& opt = {});

/// Groups in cohomological degrees lo..hi; degrees outside are absent.
struct CohomologyTable {
  Ground ground;
  int lo = 0;
  int hi = -1;
  std::map<int, std::vector<Integer>> factors;
  std::optional<HomologyRing> ring;  // homological degree -n holds degree n
  std::vector<std::string> provenance;

  bool has(int n) const { return factors.count(n) > 0; }
  std::vector<Integer> at(int n) const;
};

struct HochschildOptions {
  std::string route = "small";  // or "kill-cycles"
  bool ring = false;            // structure constants from End of the resolution; M must be H_0(C) in degree 0
  RealizeOptions realize;
};

/// HH^n(C, M) for n in lo..hi, M concentrated in degree r, computed from the model Q of C.
CohomologyTable hochschild_cohomology(const SemifreeDga& Q, const Bimodule& M, int r, int lo, int hi,
                                      const HochschildOptions& opt = {});
CohomologyTable hochschild_cohomology(const TruncatedDga& C, const Bimodule& M, int r, int lo, int hi,
                                      const HochschildOptions& opt = {});

/// Der^n(C, M) = H_{-n} Hom_E(Ω, M), with the shift rule against HH^{n+1} asserted away from -r, -r-1.
CohomologyTable derivation_groups(const SemifreeDga& Q, const Bimodule& M, int r, int lo, int hi,
                                  const HochschildOptions& opt = {});
CohomologyTable derivation_groups(const TruncatedDga& C, const Bimodule& M, int r, int lo, int hi,
                                  const HochschildOptions& opt = {});

/// Finitely supported Σ c_k γ_k over F_p, |γ_k| = 2k.
struct DividedPowerElement {
  long p = 2;
  std::map<int, long> coefficients;  // nonzero entries in [1, p)

  static DividedPowerElement gamma(int k, long p, long c = 1);
  bool is_zero() const { return coefficients.empty(); }
  std::string str() const;
  friend bool operator==(const DividedPowerElement&, const DividedPowerElement&) = default;
};

DividedPowerElement divided_power_multiply(const DividedPowerElement& a, const DividedPowerElement& b);
DividedPowerElement divided_power_add(const DividedPowerElement& a, const DividedPowerElement& b);

/// Σ c_k σ^k over F_p.
struct SigmaPolynomial {
  long p = 2;
  std::map<int, long> coefficients;

  static SigmaPolynomial power(int k, long p, long c = 1);
  std::string str() const;
};

SigmaPolynomial sigma_add(const SigmaPolynomial& a, const SigmaPolynomial& b);
SigmaPolynomial sigma_multiply(const SigmaPolynomial& a, const SigmaPolynomial& b);
/// σ^k -> k!·γ_k.
DividedPowerElement hh_to_thh(const SigmaPolynomial& c);

struct TopologicalVerdict {
  bool equivalent = false;
  std::string verdict;
  std::string criterion;
  std::string reference;
  DividedPowerElement image1, image2;
};

/// H_0(C) as a scalar bimodule in degree 0.
Bimodule augmentation_bimodule(const TruncatedDga& C);

/// A k-invariant at level n in a group of prime order p, as c·σ^{(n+3)/2}; c counts multiples of the
/// nonzero class with the smallest module part.
SigmaPolynomial sigma_coordinates(const KInvariantClass& K);

TopologicalVerdict topological_equivalence_verdict(const SigmaPolynomial& k1, const SigmaPolynomial& k2);

}  // namespace dgatk
