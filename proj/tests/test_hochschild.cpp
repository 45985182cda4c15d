#include <gtest/gtest.h>

#include <random>

#include "dgatk/postnikov.hpp"

#include "dgatk/errors.hpp"
#include "dgatk/hochschild.hpp"

using namespace dgatk;

namespace {

TruncatedDga make(const std::string& text, int N) { return realize(parse_presentation(text), N); }

TruncatedDga field(long p) {
  return brutal_truncation(make("dga \"F" + std::to_string(p) + "\" over Z { rel " + std::to_string(p) + "; }", 1), 0);
}

std::vector<Integer> Zp(long p) { return {Integer(p)}; }

}  // namespace

TEST(Resolution, SmallResolutionIsExact) {
  auto C = field(2);
  SemifreeDga Q = semifree_replacement(C, 6);
  auto R = small_resolution(Q, 6);
  EXPECT_EQ(R.env.env->check_leibniz(), "");
  EXPECT_EQ(R.env.diagonal->check(), "");
  EXPECT_EQ(R.resolution->check(6), "");
  ChainComplex P = R.resolution->complex(0, 6);
  GradedGroup H(P, 0, 5);
  GradedGroup HQ(R.env.algebra->complex, 0, 5);
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(H.factors(n), HQ.factors(n)) << n;
}

TEST(Hochschild, FieldOverIntegers) {
  auto C = field(2);
  HochschildOptions o;
  o.ring = true;
  auto T = hochschild_cohomology(C, scalar_bimodule(C, Zp(2)), 0, 0, 6, o);
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(T.at(n), n % 2 ? std::vector<Integer>{} : Zp(2)) << n;
}

TEST(Hochschild, PolynomialGeneratorPowers) {
  auto C = field(2);
  HochschildOptions o;
  o.ring = true;
  auto T = hochschild_cohomology(C, scalar_bimodule(C, Zp(2)), 0, 0, 6, o);
  ASSERT_TRUE(T.ring.has_value());
  const HomologyRing& R = *T.ring;
  ASSERT_EQ(R.size(-2), 1u);
  Vector s = unit_vector(1, 0);
  Vector s2 = R.multiply(-2, s, -2, s);
  Vector s3 = R.multiply(-4, s2, -2, s);
  EXPECT_FALSE(is_zero(R.reduce(-4, s2)));
  EXPECT_FALSE(is_zero(R.reduce(-6, s3)));
  EXPECT_EQ(R.reduce(0, R.unit()), unit_vector(1, 0));
}

TEST(Hochschild, KillCyclesRouteAgrees) {
  auto C = field(2);
  HochschildOptions o;
  o.route = "kill-cycles";
  auto T = hochschild_cohomology(C, scalar_bimodule(C, Zp(2)), 0, 0, 4, o);
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(T.at(n), n % 2 ? std::vector<Integer>{} : Zp(2)) << n;
}

TEST(Hochschild, FieldOverItself) {
  for (long p : {2L, 3L, 5L}) {
    auto C = brutal_truncation(make("dga \"F\" over F" + std::to_string(p) + " { }", 1), 0);
    auto T = hochschild_cohomology(C, scalar_bimodule(C, {Integer(0)}), 0, 0, 5);
    EXPECT_EQ(T.at(0).size(), 1u);
    for (int n = 1; n <= 5; ++n) EXPECT_TRUE(T.at(n).empty()) << p << " " << n;
  }
}

TEST(Hochschild, UnitClassInDegreeZero) {
  for (long m : {2L, 3L, 4L}) {
    auto C = field(m);
    HochschildOptions o;
    o.ring = true;
    auto T = hochschild_cohomology(C, scalar_bimodule(C, Zp(m)), 0, 0, 2, o);
    EXPECT_EQ(T.at(0), Zp(m));
    EXPECT_FALSE(is_zero(T.ring->reduce(0, T.ring->unit())));
  }
}

TEST(Hochschild, OutsideRangeIsAbsent) {
  auto C = field(2);
  auto T = hochschild_cohomology(C, scalar_bimodule(C, Zp(2)), 0, 1, 3);
  EXPECT_FALSE(T.has(0));
  EXPECT_FALSE(T.has(4));
  EXPECT_THROW(T.at(4), std::out_of_range);
  EXPECT_FALSE(T.provenance.empty());
}

TEST(Hochschild, RingNeedsAugmentationCoefficients) {
  auto C = field(2);
  HochschildOptions o;
  o.ring = true;
  EXPECT_THROW(hochschild_cohomology(C, scalar_bimodule(C, Zp(4)), 0, 0, 2, o), HypothesisError);
}

TEST(Hochschild, ZeroModule) {
  auto C = field(2);
  auto T = hochschild_cohomology(C, scalar_bimodule(C, {}), 0, 0, 4);
  auto D = derivation_groups(C, scalar_bimodule(C, {}), 0, 0, 4);
  for (int n = 0; n <= 4; ++n) {
    EXPECT_TRUE(T.at(n).empty());
    EXPECT_TRUE(D.at(n).empty());
  }
}

TEST(Derivations, FieldsMatchClassGroups) {
  for (long p : {2L, 3L}) {
    auto C = field(p);
    auto D = derivation_groups(C, scalar_bimodule(C, Zp(p)), 0, 0, 4);
    EXPECT_EQ(D.at(3), Zp(p));
    EXPECT_TRUE(D.at(2).empty());
    auto G = homotopy_classes(C, scalar_bimodule(C, Zp(p)), 3);
    EXPECT_EQ(G.order(), static_cast<std::size_t>(p));
  }
}

TEST(Derivations, ExceptionalDegrees) {
  // r = 0: Der^0 and Der^{-1} are not shifted copies of HH
  auto C = field(2);
  auto D = derivation_groups(C, scalar_bimodule(C, Zp(2)), 0, -1, 1);
  auto H = hochschild_cohomology(C, scalar_bimodule(C, Zp(2)), 0, -1, 2);
  EXPECT_TRUE(D.at(-1).empty());
  EXPECT_TRUE(H.at(0) != D.at(-1) || H.at(1) != D.at(0));
}

TEST(DividedPowers, Examples) {
  auto g = [](int k, long p) { return DividedPowerElement::gamma(k, p); };
  EXPECT_TRUE(divided_power_multiply(g(1, 2), g(1, 2)).is_zero());
  EXPECT_TRUE(divided_power_multiply(g(1, 3), g(2, 3)).is_zero());
  EXPECT_EQ(divided_power_multiply(g(1, 3), g(1, 3)), DividedPowerElement::gamma(2, 3, 2));
  DividedPowerElement x = divided_power_add(g(3, 5), DividedPowerElement::gamma(1, 5, 4));
  EXPECT_EQ(divided_power_multiply(g(0, 5), x), x);
}

TEST(DividedPowers, ComparisonMap) {
  EXPECT_EQ(hh_to_thh(SigmaPolynomial::power(1, 2)), DividedPowerElement::gamma(1, 2));
  EXPECT_EQ(hh_to_thh(SigmaPolynomial::power(0, 3)), DividedPowerElement::gamma(0, 3));
  for (long p : {2L, 3L, 5L, 7L}) EXPECT_TRUE(hh_to_thh(SigmaPolynomial::power(static_cast<int>(p), p)).is_zero());
}

TEST(Verdict, Examples) {
  for (long p : {2L, 3L, 5L}) {
    auto v = topological_equivalence_verdict(SigmaPolynomial::power(static_cast<int>(p), p), SigmaPolynomial{p, {}});
    EXPECT_TRUE(v.equivalent);
    EXPECT_EQ(v.verdict, "topologically equivalent (matching THH k-invariant images)");
    EXPECT_NE(v.reference.find("Bokstedt"), std::string::npos);
    EXPECT_NE(v.criterion.find("single square-zero extension"), std::string::npos);
    auto w = topological_equivalence_verdict(SigmaPolynomial::power(1, p), SigmaPolynomial{p, {}});
    EXPECT_FALSE(w.equivalent);
    EXPECT_EQ(w.verdict, "inequivalent (THH images differ)");
    auto s = SigmaPolynomial::power(2, p, 1);
    EXPECT_TRUE(topological_equivalence_verdict(s, s).equivalent);
  }
  EXPECT_THROW(topological_equivalence_verdict(SigmaPolynomial::power(1, 2), SigmaPolynomial::power(1, 3)), std::invalid_argument);
  EXPECT_THROW(topological_equivalence_verdict(SigmaPolynomial::power(1, 3), SigmaPolynomial::power(2, 3)), std::invalid_argument);
}

// ---------------------------------------------------------------- properties

namespace {

SigmaPolynomial random_sigma(std::mt19937& rng, long p, int top) {
  SigmaPolynomial s;
  s.p = p;
  std::uniform_int_distribution<int> terms(0, 4), deg(0, top);
  std::uniform_int_distribution<long> coef(1, p - 1);
  for (int t = terms(rng); t > 0; --t) s = sigma_add(s, SigmaPolynomial::power(deg(rng), p, coef(rng)));
  return s;
}

}  // namespace

TEST(DividedPowerProperty, ComparisonIsARingMap) {
  std::mt19937 rng(31337);
  for (long p : {2L, 3L, 5L})
    for (int c = 0; c < 200; ++c) {
      auto a = random_sigma(rng, p, 8), b = random_sigma(rng, p, 8);
      EXPECT_EQ(hh_to_thh(sigma_multiply(a, b)), divided_power_multiply(hh_to_thh(a), hh_to_thh(b)))
          << a.str() << " * " << b.str() << " at p = " << p;
      EXPECT_EQ(hh_to_thh(sigma_add(a, b)), divided_power_add(hh_to_thh(a), hh_to_thh(b)));
    }
}

TEST(DividedPowerProperty, KernelIsGeneratedBySigmaToThePrime) {
  for (long p : {2L, 3L, 5L, 7L}) {
    const int top = static_cast<int>(p * p);  // degree 2p^2
    for (int k = 0; k <= top; ++k) EXPECT_EQ(hh_to_thh(SigmaPolynomial::power(k, p)).is_zero(), k >= p) << p << " " << k;
  }
  // random combinations: in the kernel iff every term is divisible by s^p
  std::mt19937 rng(4242);
  for (long p : {2L, 3L, 5L})
    for (int c = 0; c < 200; ++c) {
      auto a = random_sigma(rng, p, static_cast<int>(p * p));
      bool in_ideal = true;
      for (const auto& [k, x] : a.coefficients) in_ideal = in_ideal && k >= p;
      EXPECT_EQ(hh_to_thh(a).is_zero(), in_ideal) << a.str();
    }
}

TEST(DividedPowerProperty, CommutativeAndAssociative) {
  std::size_t cases = 0;
  for (long p : {2L, 3L, 5L, 7L})
    for (int i = 0; i <= 9; ++i)
      for (int j = 0; j <= 9; ++j) {
        auto gi = DividedPowerElement::gamma(i, p), gj = DividedPowerElement::gamma(j, p);
        EXPECT_EQ(divided_power_multiply(gi, gj), divided_power_multiply(gj, gi));
        for (int k = 0; k <= 9; ++k, ++cases) {
          auto gk = DividedPowerElement::gamma(k, p);
          EXPECT_EQ(divided_power_multiply(divided_power_multiply(gi, gj), gk), divided_power_multiply(gi, divided_power_multiply(gj, gk)));
        }
      }
  EXPECT_GE(cases, 200u);
}

namespace {

// adds contractible pairs x, y with dy = x + d(u) for a random word u
SemifreeDga scrambled(const SemifreeDga& Q, std::mt19937& rng, int top) {
  SemifreeDga S = Q;
  auto words = enumerate_words(Q.presentation, top + 1, 100000);
  std::uniform_int_distribution<int> pairs(1, 2), deg(1, top - 1), coef(-2, 2);
  for (int t = pairs(rng); t > 0; --t) {
    const int k = deg(rng);
    std::string tag = std::to_string(S.presentation.generators.size());
    int x = S.presentation.add_generator("u" + tag, k, {});
    Polynomial dy = Polynomial::word({x});
    const auto& cand = words[static_cast<std::size_t>(k + 1)];
    if (!cand.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
      dy += Q.presentation.d(Polynomial::word(cand[pick(rng)], coef(rng)));
    }
    S.presentation.add_generator("v" + tag, k + 1, dy.normalized(S.presentation.ground));
    for (int r = 0; r < 2; ++r) S.images.push_back(Vector(S.target->dim(k + r)));
  }
  return S;
}

}  // namespace

TEST(HochschildProperty, ResolutionIndependence) {
  std::mt19937 rng(99);
  auto C = field(2);
  auto M = scalar_bimodule(C, Zp(2));
  const int hi = 3;
  SemifreeDga Q = semifree_replacement(C, hi + 2);
  auto base = hochschild_cohomology(Q, M, 0, 0, hi);
  for (int c = 0; c < 200; ++c) {
    SemifreeDga S = scrambled(Q, rng, hi + 2);
    ASSERT_EQ(S.check(hi + 2), "");
    HochschildOptions o;
    if (c % 20 == 0) o.route = "kill-cycles";
    auto T = hochschild_cohomology(S, M, 0, 0, hi, o);
    for (int n = 0; n <= hi; ++n) EXPECT_EQ(T.at(n), base.at(n)) << "case " << c << " degree " << n;
  }
}

TEST(DerivationProperty, MatchesClassGroups) {
  std::mt19937 rng(2718);
  const std::vector<std::string> bases = {
      "dga \"F\" over Z { rel P; }",
      "dga \"C\" over Z { gen e:1; diff e = P; rel e^3; rel P*e^2; }",
  };
  std::uniform_int_distribution<int> shift(1, 4), which(0, 1), rank(1, 2);
  std::vector<long> primes{2, 3, 5, 7};
  std::uniform_int_distribution<std::size_t> prime(0, primes.size() - 1);
  for (int c = 0; c < 200; ++c) {
    const long p = primes[prime(rng)];
    std::string text = bases[static_cast<std::size_t>(which(rng))];
    text.replace(text.find('P'), 1, std::to_string(p));
    if (auto at = text.find('P'); at != std::string::npos) text.replace(at, 1, std::to_string(p));
    const int m = shift(rng);
    auto C = brutal_truncation(make(text, m + 3), std::min(m, 2));
    std::vector<Integer> orders(static_cast<std::size_t>(p < 5 ? rank(rng) : 1), Integer(p));
    auto M = scalar_bimodule(C, orders);
    auto G = homotopy_classes(C, M, m);
    auto D = derivation_groups(C, M, 0, m, m);
    Integer order(1);
    for (const auto& f : D.at(m)) order *= f;
    EXPECT_EQ(order, Integer(static_cast<long>(G.order()))) << text << " m = " << m;
    EXPECT_EQ(D.at(m), G.factors) << text << " m = " << m;
  }
}
