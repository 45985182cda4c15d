#include "dgatk/homology.hpp"

#include <stdexcept>

namespace dgatk {

GradedGroup homology(const ChainComplex& c, int N) {
  int hi = c.zero_above ? std::min(N, c.hi) : std::min(N - 1, c.hi - 1);
  return GradedGroup(c, c.homology_lo(), hi);
}

GradedGroup homology(const TruncatedDga& A, int N) { return homology(A.complex, N); }

HomologyRing::HomologyRing(const TruncatedDga& A, int lo, int hi)
    : dga_(std::make_shared<TruncatedDga>(A)), groups_(A.complex, lo, hi) {}

const Vector& HomologyRing::basis_product(int a, std::size_t i, int b, std::size_t j) const {
  auto key = std::make_tuple(a, b, i, j);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Vector p = dga_->multiply(a, groups_.representative(a, i), b, groups_.representative(b, j));
  auto c = groups_.classify(a + b, p);
  if (!c) throw std::logic_error("product of cycles is not a cycle");
  return cache_.emplace(key, *c).first->second;
}

Vector HomologyRing::multiply(int a, const Vector& x, int b, const Vector& y) const {
  if (!defined(a, b)) throw std::out_of_range("homology product outside the valid range");
  Vector r(size(a + b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      const Vector& p = basis_product(a, i, b, j);
      for (std::size_t k = 0; k < p.size(); ++k) r[k] += x[i] * y[j] * p[k];
    }
  }
  return reduce(a + b, std::move(r));
}

Vector HomologyRing::unit() const {
  auto c = groups_.classify(0, dga_->unit);
  if (!c) throw std::logic_error("unit is not a cycle");
  return *c;
}

std::optional<std::vector<Vector>> HomologyRing::elements(int n, std::size_t limit) const {
  std::vector<Integer> f = factors(n);
  std::vector<long> radix;
  std::size_t total = 1;
  for (const auto& x : f) {
    long r = ground().is_field() ? ground().p : (x.is_zero() ? 0 : (x.fits_long() ? x.to_long() : 0));
    if (r <= 0) return std::nullopt;
    radix.push_back(r);
    total *= static_cast<std::size_t>(r);
    if (total > limit) return std::nullopt;
  }
  std::vector<Vector> out;
  std::vector<long> digits(radix.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    out.emplace_back(digits.begin(), digits.end());
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < radix[i]) break;
      digits[i] = 0;
    }
  }
  return out;
}

HomologyRing homology_ring(const TruncatedDga& A, int N) {
  GradedGroup g = homology(A, N);
  return HomologyRing(A, g.lo(), g.hi());
}

namespace {

std::vector<Vector> torsion_relations(const HomologyRing& R, int n) {
  std::vector<Vector> rel;
  if (R.ground().is_field()) return rel;
  auto f = R.factors(n);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!f[i].is_zero()) {
      Vector v(f.size());
      v[i] = f[i];
      rel.push_back(v);
    }
  return rel;
}

}  // namespace

std::vector<Integer> cokernel_factors(const HomologyRing& R, int n, const std::vector<Vector>& columns) {
  std::vector<Vector> all = columns;
  for (auto& v : torsion_relations(R, n)) all.push_back(std::move(v));
  return quotient_structure(R.size(n), Matrix::from_columns(R.size(n), all), R.ground()).factors;
}

std::vector<Integer> subgroup_factors(const HomologyRing& R, int n, const std::vector<Vector>& columns) {
  const std::size_t k = R.size(n);
  const std::size_t m = columns.size();
  if (m == 0) return {};
  Matrix C = Matrix::from_columns(k, columns);
  std::vector<Vector> rel = torsion_relations(R, n);
  Matrix J = rel.empty() ? C : C.hconcat(Matrix::from_columns(k, rel));
  std::vector<Vector> ker;
  for (const auto& v : kernel_basis(J, R.ground())) ker.emplace_back(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m));
  return quotient_structure(m, Matrix::from_columns(m, ker), R.ground()).factors;
}

RingFingerprint ring_fingerprint(const HomologyRing& R, std::size_t limit) {
  RingFingerprint fp;
  fp.ground = R.ground();
  fp.lo = R.lo();
  fp.hi = R.hi();
  for (int n = R.lo(); n <= R.hi(); ++n) fp.factors[n] = R.factors(n);
  if (R.defined(1, 1)) {
    bool zero = true;
    const std::size_t k = R.size(1);
    for (std::size_t i = 0; i < k && zero; ++i)
      for (std::size_t j = i; j < k && zero; ++j) {
        Vector s = R.basis_product(1, i, 1, j);
        if (i != j) s = R.reduce(2, add(s, R.basis_product(1, j, 1, i)));
        if (!is_zero(s)) zero = false;
      }
    fp.degree1_squares_zero = zero;
  }
  for (int a = std::max(1, R.lo()); a <= R.hi(); ++a)
    for (int b = std::max(1, R.lo()); a + b <= R.hi(); ++b) {
      if (!R.defined(a, b)) continue;
      std::vector<Vector> cols;
      for (std::size_t i = 0; i < R.size(a); ++i)
        for (std::size_t j = 0; j < R.size(b); ++j) cols.push_back(R.basis_product(a, i, b, j));
      fp.product_images[{a, b}] = subgroup_factors(R, a + b, cols);
      fp.product_cokernels[{a, b}] = cokernel_factors(R, a + b, cols);
    }
  for (int a = std::max(1, R.lo()); 2 * a <= R.hi(); ++a) {
    if (R.size(a) == 0) continue;
    auto elems = R.elements(a, limit);
    if (!elems) {
      fp.max_nilpotency[a] = -1;
      continue;
    }
    int best = 0;
    for (const auto& x : *elems) {
      if (is_zero(x)) continue;
      Vector p = x;
      int k = 1;
      int deg = a;
      while (!is_zero(p)) {
        if (deg + a > R.hi()) {
          k = -1;
          break;
        }
        p = R.multiply(deg, p, a, x);
        deg += a;
        ++k;
      }
      if (k < 0) {
        best = -1;
        break;
      }
      best = std::max(best, k);
    }
    fp.max_nilpotency[a] = best;
  }
  return fp;
}

namespace {

std::string factors_text(const std::vector<Integer>& f, const Ground& g) { return group_name(f, g); }

}  // namespace

std::optional<std::pair<std::string, std::string>> RingFingerprint::compare(const RingFingerprint& o) const {
  const int top = std::min(hi, o.hi);
  for (int n = std::max(lo, o.lo); n <= top; ++n) {
    auto a = factors.count(n) ? factors.at(n) : std::vector<Integer>{};
    auto b = o.factors.count(n) ? o.factors.at(n) : std::vector<Integer>{};
    if (a != b)
      return std::make_pair(std::string("groups"), "degree " + std::to_string(n) + ": " + factors_text(a, ground) + " vs " +
                                                       factors_text(b, o.ground));
  }
  if (degree1_squares_zero && o.degree1_squares_zero && *degree1_squares_zero != *o.degree1_squares_zero)
    return std::make_pair(std::string("degree1_squaring"),
                          std::string("degree-1 squaring flag: ") + (*degree1_squares_zero ? "all squares zero" : "some square nonzero") +
                              " vs " + (*o.degree1_squares_zero ? "all squares zero" : "some square nonzero"));
  for (const auto& [key, f] : product_images) {
    if (key.first + key.second > top) continue;
    auto it = o.product_images.find(key);
    if (it != o.product_images.end() && it->second != f)
      return std::make_pair(std::string("product_image"), "image of H_" + std::to_string(key.first) + " x H_" +
                                                              std::to_string(key.second) + ": " + factors_text(f, ground) +
                                                              " vs " + factors_text(it->second, o.ground));
  }
  for (const auto& [key, f] : product_cokernels) {
    if (key.first + key.second > top) continue;
    auto it = o.product_cokernels.find(key);
    if (it != o.product_cokernels.end() && it->second != f)
      return std::make_pair(std::string("product_image"), "H_" + std::to_string(key.first + key.second) + " modulo H_" +
                                                              std::to_string(key.first) + " x H_" + std::to_string(key.second) +
                                                              ": " + factors_text(f, ground) + " vs " +
                                                              factors_text(it->second, o.ground));
  }
  for (const auto& [a, k] : max_nilpotency) {
    auto it = o.max_nilpotency.find(a);
    if (it == o.max_nilpotency.end() || k < 0 || it->second < 0 || 2 * a > top) continue;
    if (it->second != k)
      return std::make_pair(std::string("nilpotency"), "largest nilpotency index in degree " + std::to_string(a) + ": " +
                                                           std::to_string(k) + " vs " + std::to_string(it->second));
  }
  return std::nullopt;
}

}  // namespace dgatk
