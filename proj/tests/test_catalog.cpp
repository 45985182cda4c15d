#include <gtest/gtest.h>

#include "dgatk/catalog.hpp"
#include "dgatk/errors.hpp"

using namespace dgatk;

namespace {

int p_rank(const std::vector<Integer>& f, long p) {
  int r = 0;
  for (const auto& x : f)
    if (x.is_zero() || divides(Integer(p), x)) ++r;
  return r;
}

int torsion_rank(const std::vector<Integer>& f, long p) {
  int r = 0;
  for (const auto& x : f)
    if (!x.is_zero() && divides(Integer(p), x)) ++r;
  return r;
}

}  // namespace

// dim H_n(A ⊗^L F_p) = rank(H_n ⊗ F_p) + rank Tor(H_{n-1}, F_p)
TEST(CatalogProperty, UniversalCoefficients) {
  const int N = 5;
  int cases = 0;
  for (const auto& e : catalog()) {
    auto P = e.presentation();
    if (P.ground.is_field()) continue;
    auto A = realize(P, N + 2);
    GradedGroup H = homology(A, N + 1);
    for (long p : {2L, 3L, 5L}) {
      DerivedTensor T = derived_tensor(A, koszul_model(p, N + 2), N);
      for (int n = 0; n <= N; ++n, ++cases) {
        int expected = p_rank(H.factors(n), p) + (n > 0 ? torsion_rank(H.factors(n - 1), p) : 0);
        EXPECT_EQ(static_cast<int>(T.ring.size(n)), expected) << e.id << " p=" << p << " n=" << n;
      }
    }
  }
  EXPECT_GE(cases, 200);
}

// |Der^m(C, H_0 C)| = |Ho(C, C ∨ Σ^m H_0 C)| wherever the map enumeration fits
TEST(CatalogProperty, DerivationsMatchClassGroups) {
  int cases = 0, nontrivial = 0;
  for (const auto& e : catalog()) {
    for (int top : {0, 2, 4})
      for (int m = 1; m <= 4; ++m) {
        auto A = brutal_truncation(realize(e.presentation(), top + 1), top);
        Bimodule M = augmentation_bimodule(A);
        std::optional<HoClassGroup> G;
        try {
          G = homotopy_classes(A, M, m, 20000);
        } catch (const ResourceError&) {
          continue;
        } catch (const HypothesisError&) {
          continue;
        }
        CohomologyTable D = derivation_groups(A, M, 0, m, m);
        Integer order(1);
        for (const auto& x : D.at(m)) order *= x;
        EXPECT_EQ(order, Integer(static_cast<long>(G->order()))) << e.id << " top=" << top << " m=" << m;
        ++cases;
        if (G->order() > 1) ++nontrivial;
      }
  }
  EXPECT_GE(cases, 40);
  EXPECT_GT(nontrivial, 0);
}
