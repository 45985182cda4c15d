#include "dgatk/dga.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

namespace {

int sign_of(long e) { return (e % 2 == 0) ? 1 : -1; }

}  // namespace

Vector MonomialBasis::project(int n, const Polynomial& p) const {
  const auto& idx = index.at(static_cast<std::size_t>(n));
  Vector v(words[static_cast<std::size_t>(n)].size());
  for (const auto& [w, c] : p.terms()) {
    auto it = idx.find(w);
    if (it == idx.end()) throw std::invalid_argument("project: word of wrong degree");
    v[it->second] += c;
  }
  return quotient[static_cast<std::size_t>(n)].project(v);
}

Polynomial MonomialBasis::lift(int n, const Vector& v) const {
  const auto& qs = quotient.at(static_cast<std::size_t>(n));
  Vector amb = ideal[static_cast<std::size_t>(n)].reduce(qs.lift_vector(v));
  Polynomial p;
  const auto& ws = words[static_cast<std::size_t>(n)];
  for (std::size_t k = 0; k < amb.size(); ++k) p.add_term(ws[k], amb[k]);
  return p;
}

bool MonomialBasis::in_ideal(int n, const Polynomial& p) const {
  if (n < 0 || static_cast<std::size_t>(n) >= words.size()) return p.is_zero();
  const auto& idx = index[static_cast<std::size_t>(n)];
  Vector v(words[static_cast<std::size_t>(n)].size());
  for (const auto& [w, c] : p.terms()) v[idx.at(w)] += c;
  return ideal[static_cast<std::size_t>(n)].contains(v);
}

TruncatedDga::TruncatedDga(ChainComplex c, BasisProduct product, Vector u)
    : complex(std::move(c)), unit(std::move(u)), product_(std::move(product)) {}

const Vector& TruncatedDga::basis_product(int a, std::size_t i, int b, std::size_t j) const {
  std::lock_guard<std::recursive_mutex> guard(cache_->lock);
  auto key = std::make_tuple(a, b);
  auto it = cache_->table.find(key);
  if (it == cache_->table.end()) it = cache_->table.emplace(key, std::vector<std::optional<Vector>>(dim(a) * dim(b))).first;
  auto& slot = it->second.at(i * dim(b) + j);
  if (!slot) slot = complex.reduce(a + b, product_(a, i, b, j));
  return *slot;
}

Vector TruncatedDga::multiply(int a, const Vector& x, int b, const Vector& y) const {
  if (!defined(a, b)) {
    if (complex.zero_above && complex.in_range(a) && complex.in_range(b) && a + b > top()) return {};
    throw std::out_of_range("product outside the valid range: degrees " + std::to_string(a) + " and " + std::to_string(b));
  }
  Vector r(dim(a + b));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      const Vector& p = basis_product(a, i, b, j);
      Integer c = x[i] * y[j];
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!p[k].is_zero()) r[k] += c * p[k];
    }
  }
  return complex.reduce(a + b, std::move(r));
}

std::string TruncatedDga::label(int n, std::size_t i) const {
  const auto& labels = complex.group(n).labels;
  if (i < labels.size() && !labels[i].empty()) return labels[i];
  return "b" + std::to_string(n) + "_" + std::to_string(i);
}

TruncatedDga TruncatedDga::truncated(int n) const {
  if (n >= top()) return *this;
  ChainComplex c(complex.ground, complex.lo, n);
  c.zero_below = complex.zero_below;
  for (int k = c.lo; k <= n; ++k) {
    c.group(k) = complex.group(k);
    c.set_d(k, complex.d(k));
  }
  TruncatedDga r(std::move(c), product_, unit);
  r.monomials = monomials;
  r.name = name;
  return r;
}

std::string TruncatedDga::check_leibniz() const {
  for (int a = lo(); a <= top(); ++a)
    for (int b = lo(); a + b <= top(); ++b) {
      if (!defined(a, b) || !complex.in_range(a + b - 1)) continue;
      for (std::size_t i = 0; i < dim(a); ++i)
        for (std::size_t j = 0; j < dim(b); ++j) {
          Vector x = unit_vector(dim(a), i), y = unit_vector(dim(b), j);
          Vector lhs = d(a + b, basis_product(a, i, b, j));
          Vector rhs(dim(a + b - 1));
          if (complex.in_range(a - 1) && defined(a - 1, b)) rhs = add(rhs, multiply(a - 1, d(a, x), b, y));
          if (complex.in_range(b - 1) && defined(a, b - 1))
            rhs = add(rhs, scale(multiply(a, x, b - 1, d(b, y)), sign_of(a)));
          if (complex.reduce(a + b - 1, rhs) != lhs)
            return "Leibniz fails on " + label(a, i) + " * " + label(b, j);
        }
    }
  return {};
}

std::string TruncatedDga::check_associativity() const {
  for (int a = lo(); a <= top(); ++a)
    for (int b = lo(); a + b <= top(); ++b)
      for (int c = lo(); a + b + c <= top(); ++c) {
        if (!defined(a, b) || !defined(a + b, c) || !defined(b, c) || !defined(a, b + c)) continue;
        for (std::size_t i = 0; i < dim(a); ++i)
          for (std::size_t j = 0; j < dim(b); ++j)
            for (std::size_t k = 0; k < dim(c); ++k) {
              Vector z = unit_vector(dim(c), k), x = unit_vector(dim(a), i);
              Vector l = multiply(a + b, basis_product(a, i, b, j), c, z);
              Vector r = multiply(a, x, b + c, basis_product(b, j, c, k));
              if (l != r) return "associativity fails on " + label(a, i) + ", " + label(b, j) + ", " + label(c, k);
            }
      }
  return {};
}

std::string TruncatedDga::check_unit() const {
  if (!complex.in_range(0)) return {};
  for (int a = lo(); a <= top(); ++a) {
    if (!defined(0, a)) continue;
    for (std::size_t i = 0; i < dim(a); ++i) {
      Vector x = complex.reduce(a, unit_vector(dim(a), i));
      if (multiply(0, unit, a, x) != x || multiply(a, x, 0, unit) != x) return "unit fails on " + label(a, i);
    }
  }
  return {};
}

std::vector<std::vector<Word>> enumerate_words(const DgaPresentation& p, int N, std::size_t cap) {
  std::vector<std::vector<Word>> words(static_cast<std::size_t>(std::max(N, -1) + 1));
  if (N < 0) return words;
  words[0].push_back({});
  for (int d = 1; d <= N; ++d) {
    auto& cur = words[static_cast<std::size_t>(d)];
    for (std::size_t g = 0; g < p.generators.size(); ++g) {
      int k = d - p.generators[g].degree;
      if (k < 0) continue;
      for (const auto& w : words[static_cast<std::size_t>(k)]) {
        Word x;
        x.reserve(w.size() + 1);
        x.push_back(static_cast<int>(g));
        x.insert(x.end(), w.begin(), w.end());
        cur.push_back(std::move(x));
        if (cur.size() > cap)
          throw ResourceError("more than " + std::to_string(cap) + " monomials in degree " + std::to_string(d));
      }
    }
    std::sort(cur.begin(), cur.end(), WordLess{});
  }
  return words;
}

namespace {

struct Realization {
  std::shared_ptr<MonomialBasis> mb;
  std::vector<Matrix> ideal_cols;
};

Realization build_ideal(const DgaPresentation& p, int N, std::size_t cap) {
  Realization r;
  r.mb = std::make_shared<MonomialBasis>();
  auto& mb = *r.mb;
  mb.presentation = p;
  mb.words = enumerate_words(p, N, cap);
  mb.index.resize(mb.words.size());
  for (std::size_t d = 0; d < mb.words.size(); ++d)
    for (std::size_t k = 0; k < mb.words[d].size(); ++k) mb.index[d].emplace(mb.words[d][k], k);
  std::vector<int> rel_deg;
  for (const auto& rel : p.relations) rel_deg.push_back(p.degree(rel));
  for (int d = 0; d <= N; ++d) {
    const std::size_t n = mb.words[static_cast<std::size_t>(d)].size();
    std::vector<Vector> cols;
    for (std::size_t ri = 0; ri < p.relations.size(); ++ri) {
      int k = rel_deg[ri];
      if (k < 0 || k > d) continue;
      for (int a = 0; a <= d - k; ++a)
        for (const auto& m : mb.words[static_cast<std::size_t>(a)])
          for (const auto& m2 : mb.words[static_cast<std::size_t>(d - k - a)]) {
            Vector v(n);
            for (const auto& [w, c] : p.relations[ri].terms()) {
              Word x = m;
              x.insert(x.end(), w.begin(), w.end());
              x.insert(x.end(), m2.begin(), m2.end());
              v[mb.index[static_cast<std::size_t>(d)].at(x)] += c;
            }
            v = normalized(std::move(v), p.ground);
            if (!is_zero(v)) cols.push_back(std::move(v));
          }
    }
    Matrix I = Matrix::from_columns(n, cols);
    mb.ideal.emplace_back(I, p.ground);
    mb.quotient.push_back(quotient_structure(n, I, p.ground));
    r.ideal_cols.push_back(std::move(I));
  }
  return r;
}

}  // namespace

ValidationReport validate(const DgaPresentation& p, int N, std::size_t monomial_cap) {
  ValidationReport rep;
  rep.checked_through = N;
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const auto& gen = p.generators[g];
    if (gen.degree <= 0) rep.issues.push_back({"degree", "generator " + gen.name + " has non-positive degree", gen.name});
    if (!p.is_homogeneous(p.differentials[g]))
      rep.issues.push_back({"homogeneity", "differential of " + gen.name + " is inhomogeneous", p.format(p.differentials[g])});
    else if (int k = p.degree(p.differentials[g]); k >= 0 && k != gen.degree - 1)
      rep.issues.push_back({"degree", "differential of " + gen.name + " has degree " + std::to_string(k),
                            p.format(p.differentials[g])});
  }
  for (const auto& r : p.relations)
    if (!p.is_homogeneous(r)) rep.issues.push_back({"homogeneity", "relation is inhomogeneous", p.format(r)});
  if (!rep.ok()) return rep;
  Realization re = build_ideal(p, N, monomial_cap);
  for (std::size_t g = 0; g < p.generators.size(); ++g) {
    const auto& gen = p.generators[g];
    if (gen.degree > N) continue;
    Polynomial dd = p.d(p.differentials[g]);
    if (gen.degree >= 2 && !re.mb->in_ideal(gen.degree - 2, dd))
      rep.issues.push_back({"d-squared", "d(d(" + gen.name + ")) is not zero modulo the relations", p.format(dd)});
  }
  for (const auto& r : p.relations) {
    int k = p.degree(r);
    if (k < 1 || k > N) continue;
    Polynomial dr = p.d(r);
    if (!re.mb->in_ideal(k - 1, dr))
      rep.issues.push_back({"ideal", "d(" + p.format(r) + ") is not in the ideal in degree " + std::to_string(k - 1),
                            p.format(re.mb->lift(k - 1, re.mb->project(k - 1, dr)))});
  }
  return rep;
}

TruncatedDga realize(const DgaPresentation& p, int N, const RealizeOptions& opt) {
  if (N < 0) throw std::invalid_argument("realize: negative degree");
  ValidationReport rep = validate(p, N, opt.monomial_cap);
  if (!rep.ok()) {
    const auto& is = rep.issues.front();
    throw HypothesisError(is.message + (is.witness.empty() ? "" : " (witness " + is.witness + ")"));
  }
  Realization re = build_ideal(p, N, opt.monomial_cap);
  auto mb = re.mb;
  ChainComplex c(p.ground, 0, N);
  std::vector<std::vector<Polynomial>> lifts(static_cast<std::size_t>(N + 1));
  for (int d = 0; d <= N; ++d) {
    const auto& qs = mb->quotient[static_cast<std::size_t>(d)];
    auto& grp = c.group(d);
    grp.orders = qs.factors;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      Polynomial l = mb->lift(d, unit_vector(qs.size(), i));
      grp.labels.push_back(p.format(l));
      lifts[static_cast<std::size_t>(d)].push_back(std::move(l));
    }
  }
  for (int d = 0; d <= N; ++d) {
    Matrix m(c.dim(d - 1), c.dim(d));
    if (d >= 1)
      for (std::size_t j = 0; j < c.dim(d); ++j) m.set_column(j, mb->project(d - 1, p.d(lifts[static_cast<std::size_t>(d)][j])));
    c.set_d(d, std::move(m));
  }
  const bool free_algebra = p.relations.empty();
  auto shared_lifts = std::make_shared<std::vector<std::vector<Polynomial>>>(std::move(lifts));
  BasisProduct prod = [mb, shared_lifts, free_algebra](int a, std::size_t i, int b, std::size_t j) -> Vector {
    const auto& L = *shared_lifts;
    const Polynomial& x = L[static_cast<std::size_t>(a)][i];
    const Polynomial& y = L[static_cast<std::size_t>(b)][j];
    if (free_algebra && x.terms().size() == 1 && y.terms().size() == 1) {
      Word w = x.terms().begin()->first;
      const Word& w2 = y.terms().begin()->first;
      w.insert(w.end(), w2.begin(), w2.end());
      Vector v(mb->words[static_cast<std::size_t>(a + b)].size());
      v[mb->index[static_cast<std::size_t>(a + b)].at(w)] = x.terms().begin()->second * y.terms().begin()->second;
      return mb->quotient[static_cast<std::size_t>(a + b)].project(v);
    }
    return mb->project(a + b, x * y);
  };
  TruncatedDga A(std::move(c), prod, mb->project(0, Polynomial::constant(1)));
  A.monomials = mb;
  A.name = p.name;
  if (opt.verify) {
    std::string why;
    if (!A.complex.is_complex(&why)) throw HypothesisError(p.name + ": " + why);
    if (!free_algebra) {
      if (auto w = A.check_leibniz(); !w.empty()) throw HypothesisError(p.name + ": " + w);
      if (auto w = A.check_associativity(); !w.empty()) throw HypothesisError(p.name + ": " + w);
    }
    if (auto w = A.check_unit(); !w.empty()) throw HypothesisError(p.name + ": " + w);
  }
  return A;
}

TruncatedDga tensor_dga(const TruncatedDga& A, const TruncatedDga& B, int N) {
  if (A.ground() != B.ground()) throw std::invalid_argument("tensor_dga: different ground rings");
  if (A.lo() < 0 || B.lo() < 0) throw std::invalid_argument("tensor_dga: negative degrees");
  auto reach = [N](const TruncatedDga& X) { return X.complex.zero_above ? N : X.top(); };
  N = std::min(N, std::min(reach(A), reach(B)));
  struct Index {
    std::vector<std::vector<std::array<std::size_t, 4>>> basis;  // (a, i, b, j)
    std::vector<std::map<std::array<std::size_t, 4>, std::size_t>> pos;
  };
  auto ix = std::make_shared<Index>();
  ix->basis.resize(static_cast<std::size_t>(N + 1));
  ix->pos.resize(static_cast<std::size_t>(N + 1));
  const Ground g = A.ground();
  ChainComplex c(g, 0, N);
  for (int n = 0; n <= N; ++n)
    for (int a = 0; a <= n; ++a) {
      int b = n - a;
      for (std::size_t i = 0; i < A.dim(a); ++i)
        for (std::size_t j = 0; j < B.dim(b); ++j) {
          Integer o = g.is_field() ? Integer(0) : gcd(A.complex.group(a).orders[i], B.complex.group(b).orders[j]);
          if (o.is_one()) continue;
          std::array<std::size_t, 4> key{static_cast<std::size_t>(a), i, static_cast<std::size_t>(b), j};
          ix->pos[static_cast<std::size_t>(n)].emplace(key, ix->basis[static_cast<std::size_t>(n)].size());
          ix->basis[static_cast<std::size_t>(n)].push_back(key);
          c.group(n).orders.push_back(o);
          c.group(n).labels.push_back("(" + A.label(a, i) + ")(x)(" + B.label(b, j) + ")");
        }
    }
  auto place = [ix](int n, std::size_t a, std::size_t i, std::size_t b, std::size_t j, const Integer& v, Vector& out) {
    auto it = ix->pos[static_cast<std::size_t>(n)].find({a, i, b, j});
    if (it != ix->pos[static_cast<std::size_t>(n)].end()) out[it->second] += v;
  };
  for (int n = 1; n <= N; ++n) {
    Matrix m(c.dim(n - 1), c.dim(n));
    const auto& basis = ix->basis[static_cast<std::size_t>(n)];
    for (std::size_t col = 0; col < basis.size(); ++col) {
      auto [a, i, b, j] = basis[col];
      Vector out(c.dim(n - 1));
      if (a >= 1) {
        Vector da = A.d(static_cast<int>(a), unit_vector(A.dim(static_cast<int>(a)), i));
        for (std::size_t k = 0; k < da.size(); ++k)
          if (!da[k].is_zero()) place(n - 1, a - 1, k, b, j, da[k], out);
      }
      if (b >= 1) {
        Vector db = B.d(static_cast<int>(b), unit_vector(B.dim(static_cast<int>(b)), j));
        int s = sign_of(static_cast<long>(a));
        for (std::size_t k = 0; k < db.size(); ++k)
          if (!db[k].is_zero()) place(n - 1, a, i, b - 1, k, db[k] * s, out);
      }
      m.set_column(col, out);
    }
    c.set_d(n, std::move(m));
  }
  for (int n = 0; n <= N; ++n) c.set_d(n, c.d(n));
  auto Ap = std::make_shared<TruncatedDga>(A);
  auto Bp = std::make_shared<TruncatedDga>(B);
  std::vector<std::size_t> dims;
  for (int n = 0; n <= N; ++n) dims.push_back(c.dim(n));
  BasisProduct prod = [ix, Ap, Bp, place, dims](int n1, std::size_t u, int n2, std::size_t v) -> Vector {
    auto [a, i, b, j] = ix->basis[static_cast<std::size_t>(n1)][u];
    auto [a2, i2, b2, j2] = ix->basis[static_cast<std::size_t>(n2)][v];
    auto bp = [](const TruncatedDga& X, std::size_t a, std::size_t i, std::size_t a2, std::size_t i2) -> Vector {
      if (X.defined(static_cast<int>(a), static_cast<int>(a2))) return X.basis_product(static_cast<int>(a), i, static_cast<int>(a2), i2);
      return {};
    };
    const Vector x = bp(*Ap, a, i, a2, i2);
    const Vector y = bp(*Bp, b, j, b2, j2);
    int s = sign_of(static_cast<long>(b * a2));
    Vector out(dims[static_cast<std::size_t>(n1 + n2)]);
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k].is_zero()) continue;
      for (std::size_t l = 0; l < y.size(); ++l)
        if (!y[l].is_zero()) place(n1 + n2, a + a2, k, b + b2, l, x[k] * y[l] * s, out);
    }
    return out;
  };
  Vector unit(c.dim(0));
  for (std::size_t k = 0; k < A.unit.size(); ++k)
    for (std::size_t l = 0; l < B.unit.size(); ++l)
      if (!A.unit[k].is_zero() && !B.unit[l].is_zero()) place(0, 0, k, 0, l, A.unit[k] * B.unit[l], unit);
  unit = c.reduce(0, unit);
  c.zero_above = A.complex.zero_above && B.complex.zero_above && N >= A.top() + B.top();
  TruncatedDga T(std::move(c), prod, unit);
  T.name = A.name + " (x) " + B.name;
  return T;
}

TruncatedDga opposite(const TruncatedDga& A) {
  auto Ap = std::make_shared<TruncatedDga>(A);
  BasisProduct prod = [Ap](int a, std::size_t i, int b, std::size_t j) -> Vector {
    return scale(Ap->basis_product(b, j, a, i), sign_of(static_cast<long>(a) * b));
  };
  TruncatedDga r(A.complex, prod, A.unit);
  r.name = A.name + "^op";
  return r;
}

TruncatedDga brutal_truncation(const TruncatedDga& A, int n) {
  if (n < A.lo()) throw std::invalid_argument("brutal_truncation below the bottom degree");
  if (n + 1 > A.top() && !A.complex.zero_above) throw std::invalid_argument("brutal_truncation needs degree n+1");
  ChainComplex c(A.ground(), A.lo(), n);
  c.zero_below = A.complex.zero_below;
  c.zero_above = true;
  for (int k = A.lo(); k < n; ++k) {
    c.group(k) = A.complex.group(k);
    c.set_d(k, A.complex.d(k));
  }
  Matrix bnd = A.complex.d(n + 1);
  Matrix rel = A.complex.group(n).relations();
  Matrix all = bnd.cols() ? (rel.cols() ? bnd.hconcat(rel) : bnd) : rel;
  if (all.rows() != A.dim(n)) all = Matrix(A.dim(n), 0);
  auto qs = std::make_shared<QuotientStructure>(quotient_structure(A.dim(n), all, A.ground()));
  c.group(n).orders = qs->factors;
  for (std::size_t i = 0; i < qs->size(); ++i) {
    Vector l = qs->lift_generator(i);
    std::vector<std::string> parts;
    std::string lab;
    for (std::size_t k = 0; k < l.size(); ++k)
      if (!l[k].is_zero()) lab += (lab.empty() ? "" : " + ") + (l[k].is_one() ? "" : l[k].str() + "*") + A.label(n, k);
    c.group(n).labels.push_back("[" + lab + "]");
  }
  {
    Matrix m(c.dim(n - 1), c.dim(n));
    if (c.in_range(n - 1))
      for (std::size_t i = 0; i < qs->size(); ++i) m.set_column(i, A.d(n, qs->lift_generator(i)));
    c.set_d(n, std::move(m));
  }
  auto Ap = std::make_shared<TruncatedDga>(A);
  BasisProduct prod = [Ap, qs, n](int a, std::size_t i, int b, std::size_t j) -> Vector {
    Vector x = a == n ? qs->lift_generator(i) : unit_vector(Ap->dim(a), i);
    Vector y = b == n ? qs->lift_generator(j) : unit_vector(Ap->dim(b), j);
    Vector p = Ap->multiply(a, x, b, y);
    return a + b == n ? qs->project(p) : p;
  };
  Vector unit = n == 0 ? qs->project(A.unit) : A.unit;
  TruncatedDga r(std::move(c), prod, unit);
  r.name = "P_" + std::to_string(n) + "(" + A.name + ")";
  return r;
}

bool same_structure(const TruncatedDga& A, const TruncatedDga& B) {
  if (A.lo() != B.lo() || A.top() != B.top()) return false;
  for (int n = A.lo(); n <= A.top(); ++n) {
    if (A.complex.group(n).orders != B.complex.group(n).orders) return false;
    if (!(A.complex.d(n) == B.complex.d(n))) return false;
  }
  for (int a = A.lo(); a <= A.top(); ++a)
    for (int b = A.lo(); a + b <= A.top(); ++b) {
      if (!A.defined(a, b)) continue;
      for (std::size_t i = 0; i < A.dim(a); ++i)
        for (std::size_t j = 0; j < A.dim(b); ++j)
          if (A.basis_product(a, i, b, j) != B.basis_product(a, i, b, j)) return false;
    }
  return A.unit == B.unit;
}

}  // namespace dgatk
