#include <gtest/gtest.h>

#include <random>

#include "dgatk/linalg.hpp"

using namespace dgatk;

namespace {

// Fraction-free determinant, independent of the normal-form code.
Integer bareiss_det(Matrix a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k).is_zero()) {
      std::size_t r = k + 1;
      while (r < n && a(r, k).is_zero()) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) = exact_div(a(i, j) * a(k, k) - a(i, k) * a(k, j), prev);
    prev = a(k, k);
  }
  return sign > 0 ? a(n - 1, n - 1) : -a(n - 1, n - 1);
}

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

bool is_diagonal_chain(const Matrix& d, const SmithForm& s) {
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j)
      if (i != j && !d(i, j).is_zero()) return false;
  for (std::size_t i = 0; i + 1 < s.rank; ++i)
    if (!divides(s.diagonal[i], s.diagonal[i + 1])) return false;
  for (const auto& v : s.diagonal)
    if (v.sign() <= 0) return false;
  return true;
}

}  // namespace

TEST(Smith, EmptyMatrix) {
  Matrix m(0, 0);
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.rank, 0u);
  EXPECT_EQ(s.U.rows(), 0u);
  EXPECT_EQ(s.V.rows(), 0u);
}

TEST(Smith, AlreadyDiagonal) {
  auto s = smith_normal_form(Matrix{{2}});
  EXPECT_EQ(s.D(1, 1), (Matrix{{2}}));
  EXPECT_EQ(s.U, (Matrix{{1}}));
  EXPECT_EQ(s.V, (Matrix{{1}}));
}

TEST(Smith, TwoThree) {
  Matrix m{{2, 0}, {0, 3}};
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, (Matrix{{1, 0}, {0, 6}}));
  EXPECT_EQ(abs(bareiss_det(s.U)), Integer(1));
  EXPECT_EQ(abs(bareiss_det(s.V)), Integer(1));
  EXPECT_EQ(s.U * s.Uinv, Matrix::identity(2));
}

TEST(Smith, OverPrimeField) {
  auto g = Ground::prime_field(3);
  Matrix m{{2, 1}, {1, 2}};
  auto s = smith_normal_form(m, g);
  EXPECT_EQ(s.rank, 1u);
  Matrix d = s.U * m * s.V;
  d.normalize(g);
  EXPECT_EQ(d, (Matrix{{1, 0}, {0, 0}}));
}

TEST(Smith, HugeEntriesPromote) {
  Matrix m{{4000000000000000000L, 3}, {3, 4000000000000000001L}};
  auto s = smith_normal_form(m);
  EXPECT_EQ(s.U * m * s.V, s.D(2, 2));
  EXPECT_EQ(s.diagonal[1], bareiss_det(m));
}

TEST(Quotient, Examples) {
  auto z2 = quotient_structure(1, Matrix{{2}});
  ASSERT_EQ(z2.factors.size(), 1u);
  EXPECT_EQ(z2.factors[0], Integer(2));

  auto free2 = quotient_structure(2, Matrix(2, 1));
  EXPECT_EQ(free2.factors, (std::vector<Integer>{0, 0}));

  auto q = quotient_structure(2, Matrix{{2, 0}, {0, 4}});
  EXPECT_EQ(q.factors, (std::vector<Integer>{2, 4}));
  EXPECT_EQ(q.order(), Integer(8));
}

TEST(Quotient, ProjectionOfLiftIsIdentity) {
  auto q = quotient_structure(3, Matrix{{2, 4}, {6, 8}, {0, 0}});
  for (std::size_t i = 0; i < q.size(); ++i) EXPECT_EQ(q.project(q.lift_generator(i)), unit_vector(q.size(), i));
}

TEST(Solve, Examples) {
  EXPECT_EQ(solve(Matrix{{2}}, Vector{4}), (Vector{2}));
  EXPECT_FALSE(solve(Matrix{{2}}, Vector{3}));
  EXPECT_EQ(solve(Matrix{{1, 1}, {0, 2}}, Vector{1, 2}), (Vector{0, 1}));
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_basis(Matrix{{0}}).size(), 1u);
  EXPECT_EQ(kernel_basis(Matrix{{0}})[0], (Vector{1}));
  EXPECT_TRUE(kernel_basis(Matrix{{2}}).empty());
  auto k = kernel_basis(Matrix{{1, -1}});
  ASSERT_EQ(k.size(), 1u);
  Vector v = k[0];
  if (v[0].sign() < 0) v = scale(v, -1);
  EXPECT_EQ(v, (Vector{1, 1}));
}

TEST(Subquotient, CyclicHomology) {
  // Z --2--> Z --0--> : homology Z/2 at the middle.
  Subquotient h(1, Matrix(0, 1), Matrix(0, 0), Matrix{{2}}, Ground::integers());
  EXPECT_EQ(h.factors(), (std::vector<Integer>{2}));
  EXPECT_EQ(h.classify(Vector{3}), (Vector{1}));
}

TEST(SmithProperty, ContractOnRandomMatrices) {
  std::mt19937_64 rng(20240601);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = rng() % 5, c = rng() % 5;
    Matrix m = random_matrix(rng, r, c, -6, 6);
    auto s = smith_normal_form(m);
    Matrix d = s.U * m * s.V;
    ASSERT_EQ(d, s.D(r, c)) << m;
    ASSERT_TRUE(is_diagonal_chain(d, s)) << m;
    ASSERT_EQ(abs(bareiss_det(s.U)), Integer(1));
    ASSERT_EQ(abs(bareiss_det(s.V)), Integer(1));
    ASSERT_EQ(s.U * s.Uinv, Matrix::identity(r));
    if (r == c) ASSERT_EQ(abs(bareiss_det(m)), s.rank == r ? [&] {
      Integer p = 1;
      for (auto& x : s.diagonal) p *= x;
      return p;
    }() : Integer(0));
  }
}

TEST(QuotientProperty, InvariantUnderPermutationAndRedundantRelations) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 250; ++trial) {
    std::size_t n = 1 + rng() % 4, k = rng() % 4;
    Matrix rel = random_matrix(rng, n, k, -5, 5);
    auto base = quotient_structure(n, rel);
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pr(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) pr(perm[i], j) = rel(i, j);
    Vector extra(n);
    for (std::size_t j = 0; j < k; ++j) extra = add(extra, scale(pr.column(j), static_cast<long>(rng() % 7) - 3));
    Matrix pr2 = k ? pr.hconcat(Matrix::from_columns(n, {extra})) : pr;
    ASSERT_EQ(quotient_structure(n, pr2).factors, base.factors);
    for (std::size_t i = 0; i < base.size(); ++i) ASSERT_EQ(base.project(base.lift_generator(i)), unit_vector(base.size(), i));
  }
}

TEST(SolveProperty, AgreesWithBoundedSearch) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t r = 1 + rng() % 3, c = 1 + rng() % 2;
    Matrix a = random_matrix(rng, r, c, -3, 3);
    Vector x0(c);
    for (auto& v : x0) v = static_cast<long>(rng() % 5) - 2;
    Vector b = a * x0;
    if (trial % 2) b[rng() % r] += static_cast<long>(rng() % 3) - 1;
    auto x = solve(a, b);
    // exhaustive search over a box large enough for these sizes
    bool found = false;
    std::vector<long> t(c, -6);
    for (;;) {
      Vector tv(t.begin(), t.end());
      if (a * tv == b) {
        found = true;
        break;
      }
      std::size_t i = 0;
      while (i < c && ++t[i] > 6) t[i++] = -6;
      if (i == c) break;
    }
    if (x) ASSERT_EQ(a * *x, b);
    if (found) ASSERT_TRUE(x.has_value()) << a;
    if (!x) ASSERT_FALSE(found);
  }
}

TEST(KernelProperty, AnnihilatedAndSaturated) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = rng() % 4, c = 1 + rng() % 5;
    Matrix a = random_matrix(rng, r, c, -4, 4);
    auto ker = kernel_basis(a);
    for (const auto& v : ker) ASSERT_TRUE(is_zero(a * v));
    auto rank = smith_normal_form(a, Ground::integers(), kSmithNone).rank;
    ASSERT_EQ(ker.size(), c - rank);
    if (ker.empty()) continue;
    auto s = smith_normal_form(Matrix::from_columns(c, ker), Ground::integers(), kSmithNone);
    ASSERT_EQ(s.rank, ker.size());
    for (const auto& d : s.diagonal) ASSERT_EQ(d, Integer(1));
  }
}

TEST(FieldProperty, SolveOverPrimeField) {
  std::mt19937_64 rng(5);
  auto g = Ground::prime_field(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    Matrix a = random_matrix(rng, r, c, 0, 4);
    Vector x0(c);
    for (auto& v : x0) v = static_cast<long>(rng() % 5);
    Vector b = normalized(a * x0, g);
    auto x = solve(a, b, g);
    ASSERT_TRUE(x.has_value());
    ASSERT_EQ(normalized(a * *x, g), b);
    for (const auto& v : kernel_basis(a, g)) ASSERT_TRUE(is_zero(normalized(a * v, g)));
  }
}
