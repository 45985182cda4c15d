#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgatk/semifree.hpp"

namespace dgatk {

/// A bimodule over a dga C concentrated in one degree; C_0 acts through the
/// given matrices and positive degrees act by zero.
struct Bimodule {
  std::vector<Integer> orders;
  std::vector<Matrix> left;   // one per basis element of C_0
  std::vector<Matrix> right;  // one per basis element of C_0
  std::vector<std::string> labels;

  std::size_t size() const { return orders.size(); }
};

/// C_0 acting through the coefficient of the unit (requires C_0 spanned by the unit).
Bimodule scalar_bimodule(const TruncatedDga& C, std::vector<Integer> orders);

/// C ∨ Σ^m M: C with M placed in degree m as a square-zero ideal.
struct SquareZeroDga {
  std::shared_ptr<const TruncatedDga> base;
  Bimodule module;
  int shift = 0;
  TruncatedDga dga;

  /// Position of the M block inside degree `shift`.
  std::size_t module_offset() const { return base->dim(shift); }
  Vector include(int n, const Vector& c) const;   // C_n -> D_n
  Vector project(int n, const Vector& x) const;   // D_n -> C_n
  Vector module_part(const Vector& x) const;      // D_shift -> M
};

SquareZeroDga square_zero_extension(const TruncatedDga& C, const Bimodule& M, int m);

/// C ∨ Hom(I, Σ^m M) with its two evaluations to C ∨ Σ^m M.
/// Degree m holds C_m ⊕ M ⊕ M (values on the two degree-0 cells of I),
/// degree m-1 holds C_{m-1} ⊕ M (value on the degree-1 cell).
struct PathObjectDga {
  std::shared_ptr<const SquareZeroDga> target;
  TruncatedDga dga;

  Vector evaluate(int end, int n, const Vector& x) const;  // end 0 or 1
  Vector constant(int n, const Vector& x) const;           // D -> PD
  std::string check() const;
};

PathObjectDga path_object(std::shared_ptr<const SquareZeroDga> D);

/// A dga map out of a semifree dga, given on generators.
struct ChainAlgebraMap {
  std::vector<Vector> images;
};

/// Candidate images for generator g; nullopt means "all elements of the target degree".
using CandidateFn = std::function<std::optional<std::vector<Vector>>(std::size_t g)>;

/// All maps on the generators of degree <= N commuting with the differential.
std::vector<ChainAlgebraMap> enumerate_dga_maps(const DgaPresentation& Q, const TruncatedDga& T, int N,
                                                const CandidateFn& candidates = {}, std::size_t cap = 1000000);
/// All elements of a finite degree of T.
std::vector<Vector> degree_elements(const TruncatedDga& T, int n, std::size_t cap = 1000000);
/// Image of a polynomial under a map given on generators.
Vector map_polynomial(const DgaPresentation& Q, const TruncatedDga& T, const std::vector<Vector>& images, int n,
                      const Polynomial& p);

/// Homotopy classes of maps Q -> C ∨ Σ^m M over C.
struct HoClassGroup {
  std::shared_ptr<const SemifreeDga> source;
  std::shared_ptr<const SquareZeroDga> target;
  std::vector<ChainAlgebraMap> maps;
  std::vector<std::size_t> class_of;        // per map
  std::vector<std::size_t> representative;  // per class: the map with smallest module part
  std::vector<std::vector<std::size_t>> sum;  // class addition table
  std::size_t zero = 0;
  std::vector<Integer> factors;  // invariant factors of the group
  std::vector<std::size_t> module_generators;  // generators of degree m
  std::map<Vector, std::size_t> index;         // module part -> map

  std::size_t order() const { return representative.size(); }
  /// Module parts of a map on the degree-m generators, concatenated.
  Vector module_part(const ChainAlgebraMap& f) const;
  /// The class of a map given by module parts on the degree-m generators.
  std::optional<std::size_t> class_of_module_part(const Vector& mu) const;
  std::string describe(std::size_t c) const;
};

/// The group Ho(C, C ∨ Σ^m M) computed from a semifree model of C truncated at m+1.
HoClassGroup homotopy_classes(std::shared_ptr<const SemifreeDga> Q, std::shared_ptr<const SquareZeroDga> D,
                              std::size_t cap = 1000000);

/// Convenience: semifree model of C through degree m+1 and the class group.
HoClassGroup homotopy_classes(const TruncatedDga& C, const Bimodule& M, int m, std::size_t cap = 1000000);

struct KInvariantClass {
  int n = 0;
  std::size_t cls = 0;
  Vector module_part;  // on the degree n+2 generators of the model of C
  std::shared_ptr<const HoClassGroup> group;
};

/// Data describing X over its n-th Postnikov target.
struct PostnikovTarget {
  TruncatedDga base;           // C, zero above n
  std::vector<Matrix> to_base;  // X_j -> C_j for j = 0..n
  Bimodule module;             // M
  Matrix theta;                // H_{n+1}(X) class coordinates -> M coordinates
};

/// C = brutal truncation of X at n, M = H_{n+1}(X) with its induced bimodule structure, theta = identity.
PostnikovTarget postnikov_target(const TruncatedDga& X, int n);

/// Class of the map classifying X over C; X must be valid through n+2.
KInvariantClass k_invariant(const TruncatedDga& X, const PostnikovTarget& T, int n,
                            std::shared_ptr<const HoClassGroup> group = nullptr);
KInvariantClass k_invariant(const TruncatedDga& X, int n);

struct Extension {
  TruncatedDga dga;
  PostnikovTarget target;  // the extension over C with theta = identity on M
};

/// The dga with k-invariant alpha: the model Q of C with Σ^{n+1}M attached along the cocycle.
Extension extension_from_class(const HoClassGroup& G, std::size_t cls, int N);

/// Bimodule automorphisms of M, as matrices (brute force).
std::vector<Matrix> bimodule_automorphisms(const Bimodule& M, const Ground& g, std::size_t cap = 100000);

struct OrbitReport {
  std::size_t group_order = 0;
  std::vector<Integer> group_factors;
  std::size_t automorphisms = 0;
  std::vector<std::vector<std::size_t>> orbits;  // classes per orbit
  std::size_t orbit_count() const { return orbits.size(); }
};

OrbitReport classify_extensions(const HoClassGroup& G, const Ground& g);

/// Attach cells to kill homology in degrees n+1..N-1; the comparison goes to the brutal truncation of the target at n.
SemifreeDga postnikov_section(const SemifreeDga& Q, int n, int N, const RealizeOptions& opt = {});

}  // namespace dgatk
