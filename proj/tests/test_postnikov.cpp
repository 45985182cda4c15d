#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "dgatk/errors.hpp"
#include "dgatk/postnikov.hpp"

using namespace dgatk;

namespace {

TruncatedDga make(const std::string& text, int N) { return realize(parse_presentation(text), N); }

std::string field_text(long p) { return "dga \"F" + std::to_string(p) + "\" over Z { rel " + std::to_string(p) + "; }"; }

const char* kCp2 = R"(dga "C" over Z { gen e:1; diff e = 2; rel e^4; })";
const char* kC3 = R"(dga "C3" over Z { gen e:1; diff e = 3; rel e^3; rel 3*e^2; })";
const char* kCube2 = R"(dga "C2" over Z { gen e:1; diff e = 2; rel e^3; rel 2*e^2; })";
const char* kLambda = R"(dga "L" over Z { gen g:2; rel 2; rel g^2; })";

std::shared_ptr<SquareZeroDga> field_extension(long p, int m) {
  auto C = make(field_text(p), 1);
  C = brutal_truncation(C, 0);
  return std::make_shared<SquareZeroDga>(square_zero_extension(C, scalar_bimodule(C, {Integer(p)}), m));
}

std::shared_ptr<HoClassGroup> field_group(long p, int m) {
  auto D = field_extension(p, m);
  auto Q = std::make_shared<SemifreeDga>(semifree_replacement(*D->base, m + 1));
  return std::make_shared<HoClassGroup>(homotopy_classes(Q, D));
}

}  // namespace

TEST(SquareZero, AxiomsHold) {
  auto D = field_extension(2, 3);
  EXPECT_EQ(D->dga.check_leibniz(), "");
  EXPECT_EQ(D->dga.check_associativity(), "");
  EXPECT_EQ(D->dga.check_unit(), "");
  EXPECT_EQ(D->dga.dim(3), 1u);
  EXPECT_EQ(D->dga.dim(1), 0u);
}

TEST(SquareZero, ExteriorAlgebraIsSquareZero) {
  auto L = make(R"(dga "L" over F2 { gen g:2; rel g^2; })", 4);
  auto F = brutal_truncation(make(R"(dga "F" over F2 { })", 1), 0);
  auto D = square_zero_extension(F, scalar_bimodule(F, {Integer(0)}), 2);
  EXPECT_TRUE(same_structure(L.truncated(2), D.dga));
}

TEST(PathObject, EvaluationsAndConstantPath) {
  for (int m : {1, 2, 3}) {
    auto P = path_object(field_extension(3, m));
    EXPECT_EQ(P.check(), "") << "shift " << m;
  }
}

TEST(MapEnumeration, FieldReplacementIntoSquareZero) {
  auto D = field_extension(2, 3);
  auto Q = semifree_replacement(*D->base, 4);
  auto maps = enumerate_dga_maps(Q.presentation, D->dga, 4);
  ASSERT_EQ(maps.size(), 2u);
  // e -> 0, f -> 0 or g
  const auto& names = Q.presentation.generators;
  std::set<Vector> f_images;
  for (const auto& m : maps)
    for (std::size_t k = 0; k < names.size(); ++k) {
      if (names[k].name == "e") EXPECT_TRUE(m.images[k].empty() || is_zero(m.images[k]));
      if (names[k].name == "f") f_images.insert(m.images[k]);
    }
  EXPECT_EQ(f_images, (std::set<Vector>{Vector{0}, Vector{1}}));
}

TEST(MapEnumeration, OddPrime) {
  auto D = field_extension(3, 3);
  auto Q = semifree_replacement(*D->base, 4);
  EXPECT_EQ(enumerate_dga_maps(Q.presentation, D->dga, 4).size(), 3u);
}

TEST(MapEnumeration, FreeSummandIsRefused) {
  auto T = make(R"(dga "T" over Z { gen x:2; })", 4);
  auto Q = semifree_replacement(make(R"(dga "T" over Z { gen x:2; })", 5), 4);
  try {
    enumerate_dga_maps(Q.presentation, T, 4);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("infinite search space"), std::string::npos);
  }
}

TEST(MapEnumeration, CapIsEnforced) {
  auto D = field_extension(2, 3);
  auto Q = semifree_replacement(*D->base, 4);
  EXPECT_THROW(enumerate_dga_maps(Q.presentation, D->dga, 4, {}, 1), ResourceError);
}

TEST(HomotopyClasses, FieldGroups) {
  auto G2 = field_group(2, 3);
  EXPECT_EQ(G2->order(), 2u);
  EXPECT_EQ(G2->factors, (std::vector<Integer>{2}));
  auto G3 = field_group(3, 3);
  EXPECT_EQ(G3->order(), 3u);
  EXPECT_EQ(G3->factors, (std::vector<Integer>{3}));
}

TEST(HomotopyClasses, RelationIsAnEquivalenceOnPaths) {
  // every pair joined by a path is joined in both directions, and constant paths exist
  for (long p : {2L, 3L}) {
    auto D = field_extension(p, 3);
    auto Q = semifree_replacement(*D->base, 4);
    auto P = path_object(D);
    auto G = homotopy_classes(std::make_shared<SemifreeDga>(Q), D);
    std::set<std::pair<Vector, Vector>> pairs;
    auto pmaps = enumerate_dga_maps(Q.presentation, P.dga, 4, [&](std::size_t g) -> std::optional<std::vector<Vector>> {
      int deg = Q.presentation.generators[g].degree;
      if (deg == 3 || deg == 2) return std::nullopt;
      return std::vector<Vector>{Vector(P.dga.complex.in_range(deg) ? P.dga.dim(deg) : 0)};
    });
    for (const auto& F : pmaps) {
      Vector a, b;
      for (std::size_t k = 0; k < F.images.size(); ++k)
        if (Q.presentation.generators[k].degree == 3) {
          a.push_back(P.evaluate(0, 3, F.images[k])[0]);
          b.push_back(P.evaluate(1, 3, F.images[k])[0]);
        }
      pairs.insert({a, b});
    }
    for (const auto& [a, b] : pairs) {
      EXPECT_TRUE(pairs.count({b, a}));
      EXPECT_TRUE(pairs.count({a, a}));
    }
    EXPECT_EQ(G.order(), static_cast<std::size_t>(p));
  }
}

TEST(HomotopyClasses, AdditionTableIsAGroup) {
  auto G = field_group(3, 3);
  const std::size_t n = G->order();
  for (std::size_t a = 0; a < n; ++a) {
    EXPECT_EQ(G->sum[a][G->zero], a);
    for (std::size_t b = 0; b < n; ++b) {
      EXPECT_EQ(G->sum[a][b], G->sum[b][a]);
      for (std::size_t c = 0; c < n; ++c) EXPECT_EQ(G->sum[G->sum[a][b]][c], G->sum[a][G->sum[b][c]]);
    }
  }
}

TEST(KInvariant, CyclicPolynomialTruncationIsNonzero) {
  auto X = make(kCp2, 5);
  auto K = k_invariant(X, 1);
  EXPECT_EQ(K.group->order(), 2u);
  EXPECT_NE(K.cls, K.group->zero);
  auto Y = make(kC3, 5);
  auto K3 = k_invariant(Y, 1);
  EXPECT_EQ(K3.group->order(), 3u);
  EXPECT_NE(K3.cls, K3.group->zero);
  auto K2 = k_invariant(make(kCube2, 5), 1);
  EXPECT_NE(K2.cls, K2.group->zero);
}

TEST(KInvariant, ExteriorAlgebraIsZero) {
  auto K = k_invariant(make(kLambda, 5), 1);
  EXPECT_EQ(K.group->order(), 2u);
  EXPECT_EQ(K.cls, K.group->zero);
}

TEST(Extension, RoundTripForEveryClass) {
  for (long p : {2L, 3L}) {
    auto G = field_group(p, 3);
    for (std::size_t c = 0; c < G->order(); ++c) {
      auto E = extension_from_class(*G, c, 5);
      EXPECT_TRUE(E.dga.complex.is_complex());
      EXPECT_EQ(E.dga.check_leibniz(), "");
      auto H = homology(E.dga, 4);
      EXPECT_EQ(H.factors(0), (std::vector<Integer>{Integer(p)}));
      EXPECT_TRUE(H.factors(1).empty());
      EXPECT_EQ(H.factors(2), (std::vector<Integer>{Integer(p)}));
      EXPECT_TRUE(H.factors(3).empty());
      auto K = k_invariant(E.dga, E.target, 1, G);
      EXPECT_EQ(K.cls, c) << "p=" << p << " class " << c;
    }
  }
}

TEST(Extension, NonzeroClassMatchesCyclicTruncation) {
  // the extension by the nonzero class has the homology ring of C, the zero class that of the exterior algebra
  auto G = field_group(2, 3);
  std::size_t nonzero = G->zero == 0 ? 1 : 0;
  auto E = extension_from_class(*G, nonzero, 5);
  auto F = extension_from_class(*G, G->zero, 5);
  auto K1 = k_invariant(make(kCp2, 5), 1);
  EXPECT_NE(K1.cls, K1.group->zero);
  EXPECT_NE(k_invariant(E.dga, E.target, 1, G).cls, G->zero);
  EXPECT_EQ(k_invariant(F.dga, F.target, 1, G).cls, G->zero);
}

TEST(Orbits, FieldExamples) {
  auto G2 = field_group(2, 3);
  auto R2 = classify_extensions(*G2, Ground::integers());
  EXPECT_EQ(R2.group_order, 2u);
  EXPECT_EQ(R2.automorphisms, 1u);
  EXPECT_EQ(R2.orbit_count(), 2u);
  auto G3 = field_group(3, 3);
  auto R3 = classify_extensions(*G3, Ground::integers());
  EXPECT_EQ(R3.group_order, 3u);
  EXPECT_EQ(R3.automorphisms, 2u);
  EXPECT_EQ(R3.orbit_count(), 2u);
}

TEST(Orbits, ZeroModule) {
  auto C = brutal_truncation(make(field_text(2), 1), 0);
  auto G = homotopy_classes(C, scalar_bimodule(C, {}), 3);
  auto R = classify_extensions(G, Ground::integers());
  EXPECT_EQ(R.group_order, 1u);
  EXPECT_EQ(R.orbit_count(), 1u);
}

TEST(Orbits, OrbitSizesDivideAutomorphisms) {
  for (long p : {2L, 3L, 5L}) {
    auto G = field_group(p, 3);
    auto R = classify_extensions(*G, Ground::integers());
    std::size_t total = 0;
    for (const auto& o : R.orbits) {
      EXPECT_EQ(R.automorphisms % o.size(), 0u);
      total += o.size();
    }
    EXPECT_EQ(total, R.group_order);
  }
}

TEST(Section, KillsHomologyAboveN) {
  auto X = make(kCp2, 8);
  auto Q = semifree_replacement(X, 6);
  auto S = postnikov_section(Q, 1, 6);
  EXPECT_EQ(S.check(5), "");
  auto H = homology(S.realize(6), 6);
  EXPECT_EQ(H.factors(0), (std::vector<Integer>{2}));
  for (int d = 1; d <= 5; ++d) EXPECT_TRUE(H.factors(d).empty()) << "degree " << d;
}

TEST(Section, RandomTruncationsAgreeWithBrutalTruncation) {
  std::mt19937 rng(2024);
  const char* sources[] = {kCp2, kC3, kLambda, R"(dga "T" over Z { gen x:2; diff x = 0; rel 3*x^2; })",
                           R"(dga "E" over Z { gen a:1; gen b:2; diff a = 0; diff b = 4*a; rel a^2; rel b^2; rel a*b + b*a; })"};
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const char* src = sources[rng() % std::size(sources)];
    int n = static_cast<int>(rng() % 2);
    int N = n + 3;
    auto X = make(src, N + 3);
    auto Q = semifree_replacement(X, N + 1);
    auto S = postnikov_section(Q, n, N);
    auto HS = homology(S.realize(N), N);
    auto HX = homology(X, N);
    for (int d = 0; d <= N - 1; ++d) {
      if (d <= n)
        EXPECT_EQ(HS.factors(d), HX.factors(d)) << src << " degree " << d;
      else
        EXPECT_TRUE(HS.factors(d).empty()) << src << " degree " << d;
    }
    ++cases;
  }
  EXPECT_EQ(cases, 200);
}

TEST(KInvariant, TrivialSquareZeroExtensionsAreZero) {
  for (long p : {2L, 3L, 5L}) {
    auto C = brutal_truncation(make(field_text(p), 1), 0);
    for (std::size_t rank : {1u, 2u}) {
      auto D = square_zero_extension(C, scalar_bimodule(C, std::vector<Integer>(rank, Integer(p))), 2);
      auto K = k_invariant(D.dga, 1);
      EXPECT_EQ(K.group->order(), static_cast<std::size_t>(std::pow(p, rank)));
      EXPECT_EQ(K.cls, K.group->zero) << "p=" << p << " rank " << rank;
    }
  }
}

TEST(Extension, RandomClassesRoundTripAndTwist) {
  std::mt19937 rng(777);
  std::map<long, std::shared_ptr<HoClassGroup>> groups;
  std::map<long, std::vector<Matrix>> auts;
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const long primes[] = {2, 3, 5, 7};
    long p = primes[rng() % 4];
    if (!groups.count(p)) {
      groups[p] = field_group(p, 3);
      auts[p] = bimodule_automorphisms(groups[p]->target->module, Ground::integers());
    }
    const auto& G = *groups[p];
    std::size_t c = rng() % G.order();
    auto E = extension_from_class(G, c, 5);
    ASSERT_EQ(k_invariant(E.dga, E.target, 1, groups[p]).cls, c);
    // twisting by an automorphism of M keeps the homology ring
    const Matrix& A = auts[p][rng() % auts[p].size()];
    Vector moved = A * G.module_part(G.maps[G.representative[c]]);
    auto d = G.class_of_module_part(moved);
    ASSERT_TRUE(d.has_value());
    auto E2 = extension_from_class(G, *d, 5);
    auto f1 = ring_fingerprint(homology_ring(E.dga, 4)), f2 = ring_fingerprint(homology_ring(E2.dga, 4));
    EXPECT_FALSE(f1.compare(f2).has_value()) << f1.compare(f2)->second;
    ++cases;
  }
  EXPECT_EQ(cases, 200);
}
