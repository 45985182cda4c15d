#include "dgatk/semifree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

namespace {

int sign_of(long e) { return (e % 2 == 0) ? 1 : -1; }

// Scalar making the first nonzero entry 1 over a field, positive over Z.
Integer leading_normalizer(const Vector& v, const Ground& g) {
  for (const auto& x : v)
    if (!x.is_zero()) {
      if (g.is_field()) return g.inverse(x);
      return x.sign() < 0 ? Integer(-1) : Integer(1);
    }
  return Integer(1);
}

void place(Vector& out, std::size_t off, const Vector& block) {
  for (std::size_t i = 0; i < block.size(); ++i) out[off + i] += block[i];
}

Vector slice(const Vector& v, std::size_t off, std::size_t len) {
  return Vector(v.begin() + static_cast<std::ptrdiff_t>(off), v.begin() + static_cast<std::ptrdiff_t>(off + len));
}

std::string killer_name(std::size_t k) {
  static const char* names[] = {"e", "f", "g", "h", "k", "l", "m", "n", "p", "q", "r", "s", "t", "u", "w"};
  if (k < std::size(names)) return names[k];
  return "v" + std::to_string(k + 1);
}

// Mapping cone in degrees d-1..d+1: C_n = X_n (+) S_{n-1}, d(y, x) = (dy + f x, -dx).
struct ConeBlocks {
  std::function<std::size_t(int)> target_dim;
  std::function<std::vector<Integer>(int)> target_orders;
  std::function<Matrix(int)> target_d;
  std::function<std::size_t(int)> source_dim;
  std::function<std::vector<Integer>(int)> source_orders;
  std::function<Matrix(int)> source_d;
  std::function<Matrix(int)> map;
};

ChainComplex cone(const Ground& g, const ConeBlocks& B, int d) {
  ChainComplex K(g, d - 1, d + 1);
  K.zero_below = false;
  for (int n = d - 1; n <= d + 1; ++n) {
    auto o = B.target_orders(n);
    auto s = B.source_orders(n - 1);
    o.insert(o.end(), s.begin(), s.end());
    K.group(n).orders = std::move(o);
  }
  for (int n = d; n <= d + 1; ++n) {
    const std::size_t a1 = B.target_dim(n - 1), q1 = B.source_dim(n - 2);
    const std::size_t a0 = B.target_dim(n), q0 = B.source_dim(n - 1);
    Matrix m(a1 + q1, a0 + q0);
    Matrix dt = B.target_d(n), f = B.map(n - 1), ds = B.source_d(n - 1);
    for (std::size_t i = 0; i < a1; ++i) {
      for (std::size_t j = 0; j < a0; ++j) m(i, j) = dt(i, j);
      for (std::size_t j = 0; j < q0; ++j) m(i, a0 + j) = f(i, j);
    }
    for (std::size_t i = 0; i < q1; ++i)
      for (std::size_t j = 0; j < q0; ++j) m(a1 + i, a0 + j) = -ds(i, j);
    K.set_d(n, std::move(m));
  }
  return K;
}

}  // namespace

// ---------------------------------------------------------------- SemifreeDga

int SemifreeDga::stage_count() const {
  int s = 0;
  for (const auto& g : presentation.generators) s = std::max(s, g.stage);
  return s;
}

DgaPresentation SemifreeDga::stage(int s) const {
  DgaPresentation p;
  p.name = presentation.name + " T" + std::to_string(s);
  p.ground = presentation.ground;
  std::vector<int> remap(presentation.generators.size(), -1);
  for (std::size_t g = 0; g < presentation.generators.size(); ++g) {
    const auto& gen = presentation.generators[g];
    if (gen.stage > s) continue;
    Polynomial d;
    for (const auto& [w, c] : presentation.differentials[g].terms()) {
      Word w2;
      for (int x : w) w2.push_back(remap[static_cast<std::size_t>(x)]);
      d.add_term(w2, c);
    }
    remap[g] = p.add_generator(gen.name, gen.degree, d, gen.stage);
  }
  return p;
}

TruncatedDga SemifreeDga::realize(int N, const RealizeOptions& opt) const { return dgatk::realize(presentation, N, opt); }

Matrix SemifreeDga::comparison(const TruncatedDga& Q, int n) const {
  const TruncatedDga& A = *target;
  Matrix m(A.dim(n), Q.dim(n));
  if (A.dim(n) == 0) return m;
  if (!A.complex.in_range(n)) throw std::out_of_range("comparison map outside the target's range");
  std::map<Word, Vector, WordLess> memo;
  std::function<Vector(const Word&, std::size_t)> image = [&](const Word& w, std::size_t from) -> Vector {
    Word tail(w.begin() + static_cast<std::ptrdiff_t>(from), w.end());
    auto it = memo.find(tail);
    if (it != memo.end()) return it->second;
    Vector r;
    int deg = presentation.word_degree(tail);
    if (A.complex.zero_above && deg > A.top()) return {};
    if (tail.empty()) {
      r = A.unit;
    } else if (tail.size() == 1) {
      r = images[static_cast<std::size_t>(tail[0])];
    } else {
      int a = presentation.generators[static_cast<std::size_t>(tail[0])].degree;
      Vector rest = image(w, from + 1);
      r = rest.empty() ? Vector(A.dim(deg)) : A.multiply(a, images[static_cast<std::size_t>(tail[0])], deg - a, rest);
    }
    memo.emplace(tail, r);
    return r;
  };
  for (std::size_t j = 0; j < Q.dim(n); ++j) {
    Polynomial p = Q.monomials->lift(n, unit_vector(Q.dim(n), j));
    Vector col(A.dim(n));
    for (const auto& [w, c] : p.terms()) {
      Vector v = image(w, 0);
      if (!v.empty()) col = add(col, scale(v, c));
    }
    m.set_column(j, A.complex.reduce(n, col));
  }
  return m;
}

std::string SemifreeDga::check(int N) const {
  const TruncatedDga& A = *target;
  TruncatedDga Q = realize(N);
  std::vector<Matrix> phi;
  for (int n = 0; n <= N; ++n) phi.push_back(comparison(Q, n));
  if (A.complex.reduce(0, phi[0].column(0)) != A.complex.reduce(0, A.unit)) return "comparison map does not preserve the unit";
  for (int n = 1; n <= N; ++n)
    for (std::size_t j = 0; j < Q.dim(n); ++j) {
      if (A.dim(n - 1) == 0) continue;
      Vector l = A.complex.reduce(n - 1, phi[static_cast<std::size_t>(n - 1)] * Q.complex.d(n).column(j));
      Vector r = A.complex.in_range(n) ? A.d(n, phi[static_cast<std::size_t>(n)].column(j)) : Vector(A.dim(n - 1));
      if (l != r) return "comparison map is not a chain map on " + Q.label(n, j);
    }
  for (int a = 1; a <= N; ++a)
    for (int b = 1; a + b <= N; ++b)
      for (std::size_t i = 0; i < Q.dim(a); ++i)
        for (std::size_t j = 0; j < Q.dim(b); ++j) {
          if (A.dim(a + b) == 0) continue;
          Vector l = A.complex.reduce(a + b, phi[static_cast<std::size_t>(a + b)] * Q.basis_product(a, i, b, j));
          Vector r = A.multiply(a, phi[static_cast<std::size_t>(a)].column(i), b, phi[static_cast<std::size_t>(b)].column(j));
          if (l != r) return "comparison map is not multiplicative on " + Q.label(a, i) + " * " + Q.label(b, j);
        }
  return {};
}

SemifreeDga semifree_replacement(const TruncatedDga& A, int N, const RealizeOptions& opt) {
  if (A.lo() != 0) throw std::invalid_argument("semifree_replacement: the target must start in degree 0");
  if (A.top() < N + 1 && !A.complex.zero_above)
    throw std::invalid_argument("semifree_replacement: target needed through degree " + std::to_string(N + 1));
  SemifreeDga S;
  S.target = std::make_shared<TruncatedDga>(A);
  S.presentation.name = A.name.empty() ? "Q" : "Q(" + A.name + ")";
  S.presentation.ground = A.ground();
  S.validity = N;
  S.notes.push_back("cells attached for generating sets of homology, not for all cycles");
  RealizeOptions quiet = opt;
  quiet.verify = false;
  const Ground& g = A.ground();

  // stage 1: algebra generators of H_*(A), greedily by degree
  std::size_t stage1 = 0;
  for (int d = 1; d <= N; ++d) {
    if (A.complex.zero_above && d > A.top()) break;
    GradedGroup H(A.complex, d, d);
    if (H.size(d) == 0) continue;
    TruncatedDga Q = S.realize(d, quiet);
    Matrix phi = S.comparison(Q, d);
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < phi.cols(); ++j) {
      auto c = H.classify(d, phi.column(j));
      if (!c) throw std::logic_error("semifree_replacement: decomposable image is not a cycle");
      cols.push_back(*c);
    }
    auto f = H.factors(d);
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!f[i].is_zero() && !g.is_field()) cols.push_back(scale(unit_vector(f.size(), i), f[i]));
    QuotientStructure qs = quotient_structure(f.size(), Matrix::from_columns(f.size(), cols), g);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      Vector y = H.representative_of(d, H.at(d).structure().reduce(qs.lift_generator(i)));
      y = A.complex.reduce(d, scale(y, leading_normalizer(y, g)));
      S.presentation.add_generator("x" + std::to_string(++stage1), d, {}, 1);
      S.images.push_back(y);
    }
  }

  // later stages: kill the homology of the mapping cone degree by degree
  int stage = 1;
  std::size_t killers = 0;
  for (int d = 0; d <= N; ++d) {
    TruncatedDga Q = S.realize(std::max(d, 0), quiet);
    ConeBlocks B;
    B.target_dim = [&](int n) { return A.dim(n); };
    B.target_orders = [&](int n) { return A.complex.in_range(n) ? A.complex.group(n).orders : std::vector<Integer>{}; };
    B.target_d = [&](int n) { return A.complex.d(n); };
    B.source_dim = [&](int n) { return Q.dim(n); };
    B.source_orders = [&](int n) { return Q.complex.in_range(n) ? Q.complex.group(n).orders : std::vector<Integer>{}; };
    B.source_d = [&](int n) { return Q.complex.d(n); };
    B.map = [&](int n) { return n < 0 ? Matrix(A.dim(n), 0) : S.comparison(Q, n); };
    ChainComplex K = cone(g, B, d);
    GradedGroup G(K, d, d);
    if (G.size(d) == 0) continue;
    if (d == 0) throw HypothesisError("semifree_replacement: H_0 of the target is not generated by the unit");
    ++stage;
    const std::size_t a = A.dim(d);
    for (std::size_t i = 0; i < G.size(d); ++i) {
      const Vector& rep = G.representative(d, i);
      Vector y = slice(rep, 0, a), x = slice(rep, a, rep.size() - a);
      Integer u = is_zero(x) ? leading_normalizer(scale(y, Integer(-1)), g) : leading_normalizer(x, g);
      x = Q.complex.reduce(d - 1, scale(x, u));
      y = A.complex.in_range(d) ? A.complex.reduce(d, scale(y, -u)) : Vector{};
      Polynomial dv = Q.monomials->lift(d - 1, x).normalized(g);
      S.presentation.add_generator(killer_name(killers++), d, dv, stage);
      S.images.push_back(y);
    }
  }
  return S;
}

// ---------------------------------------------------------------- modules

Vector DgModule::act(int a, const Vector& e, int m, const Vector& x) const {
  const int n = a + m;
  if (!complex.in_range(n)) {
    if ((n > complex.hi && complex.zero_above) || (n < complex.lo && complex.zero_below)) return {};
    throw std::out_of_range("module action outside the stored range: degree " + std::to_string(n));
  }
  Vector r(dim(n));
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j].is_zero()) continue;
      Vector p = action(a, i, m, j);
      Integer c = e[i] * x[j];
      for (std::size_t k = 0; k < p.size(); ++k)
        if (!p[k].is_zero()) r[k] += c * p[k];
    }
  }
  return complex.reduce(n, std::move(r));
}

std::string DgModule::check() const {
  const TruncatedDga& E = *base;
  for (int m = complex.lo; m <= complex.hi; ++m)
    for (int a = E.lo(); a + m <= complex.hi && a <= E.top(); ++a)
      for (std::size_t i = 0; i < E.dim(a); ++i)
        for (std::size_t j = 0; j < dim(m); ++j) {
          Vector e = unit_vector(E.dim(a), i), x = unit_vector(dim(m), j);
          Vector ex = act(a, e, m, x);
          if (complex.in_range(a + m - 1) && a + m - 1 >= complex.lo) {
            Vector l = complex.apply_d(a + m, ex);
            Vector r(dim(a + m - 1));
            if (a >= 1) {
              Vector t = act(a - 1, E.d(a, e), m, x);
              if (!t.empty()) r = add(r, t);
            }
            if (complex.in_range(m - 1)) {
              Vector t = act(a, e, m - 1, complex.apply_d(m, x));
              if (!t.empty()) r = add(r, scale(t, sign_of(a)));
            }
            if (l != complex.reduce(a + m - 1, r))
              return "Leibniz fails for " + E.label(a, i) + " acting in degree " + std::to_string(m);
          }
          for (int b = E.lo(); a + b <= E.top() && a + b + m <= complex.hi; ++b)
            for (std::size_t k = 0; k < E.dim(b); ++k) {
              Vector f = unit_vector(E.dim(b), k);
              Vector l = act(a + b, E.multiply(a, e, b, f), m, x);
              Vector r = act(a, e, b + m, act(b, f, m, x));
              if (l != r) return "action is not associative on " + E.label(a, i) + ", " + E.label(b, k);
            }
        }
  return {};
}

DgModule free_module(const TruncatedDga& E) {
  DgModule M;
  auto Ep = std::make_shared<TruncatedDga>(E);
  M.base = Ep;
  M.complex = E.complex;
  M.action = [Ep](int a, std::size_t i, int m, std::size_t j) { return Ep->basis_product(a, i, m, j); };
  M.name = E.name;
  return M;
}

DgModule trivial_module(const TruncatedDga& E, std::vector<Integer> orders, int degree, const std::string& name) {
  if (E.dim(0) != 1 || E.unit != unit_vector(1, 0)) throw HypothesisError("trivial_module: degree 0 of the base is not spanned by the unit");
  DgModule M;
  M.base = std::make_shared<TruncatedDga>(E);
  M.complex = ChainComplex(E.ground(), degree, degree);
  M.complex.zero_above = true;
  if (E.ground().is_field()) std::fill(orders.begin(), orders.end(), Integer(0));
  M.complex.group(degree).orders = orders;
  for (std::size_t i = 0; i < orders.size(); ++i) M.complex.group(degree).labels.push_back(name + std::to_string(i));
  M.complex.set_d(degree, Matrix(0, orders.size()));
  const std::size_t k = orders.size();
  M.action = [k](int a, std::size_t, int, std::size_t j) -> Vector {
    if (a == 0) return unit_vector(k, j);
    return Vector(0);
  };
  M.name = name;
  return M;
}

SemifreeModule::SemifreeModule(std::shared_ptr<const TruncatedDga> E, std::shared_ptr<const DgModule> M)
    : base(std::move(E)), target(std::move(M)) {}

std::size_t SemifreeModule::dim(int n) const {
  std::size_t s = 0;
  for (const auto& b : basis) s += base->dim(n - b.degree);
  return s;
}

std::size_t SemifreeModule::offset(std::size_t b, int n) const {
  std::size_t s = 0;
  for (std::size_t k = 0; k < b; ++k) s += base->dim(n - basis[k].degree);
  return s;
}

std::size_t SemifreeModule::add_basis(std::string name, int degree, Vector d, Vector image) {
  if (!basis.empty() && degree < basis.back().degree) throw std::invalid_argument("basis elements must be added in degree order");
  if (d.size() != dim(degree - 1)) throw std::invalid_argument("differential of " + name + " has the wrong length");
  basis.push_back({std::move(name), degree, std::move(d), std::move(image)});
  return basis.size() - 1;
}

Vector SemifreeModule::reduce(int n, Vector x) const {
  std::size_t off = 0;
  for (const auto& b : basis) {
    const int k = n - b.degree;
    const std::size_t len = base->dim(k);
    if (len == 0) continue;
    Vector r = base->complex.reduce(k, slice(x, off, len));
    std::copy(r.begin(), r.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
    off += len;
  }
  return x;
}

Vector SemifreeModule::element(std::size_t b, int n, const Vector& e) const {
  Vector v(dim(n));
  place(v, offset(b, n), e);
  return v;
}

Vector SemifreeModule::act(int a, const Vector& e, int n, const Vector& x) const {
  Vector out(dim(a + n));
  std::size_t off = 0;
  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    const int k = n - basis[bi].degree;
    const std::size_t len = base->dim(k);
    if (len == 0) continue;
    Vector c = slice(x, off, len);
    off += len;
    if (is_zero(c)) continue;
    Vector r = base->multiply(a, e, k, c);
    if (!r.empty()) place(out, offset(bi, a + n), r);
  }
  return reduce(a + n, std::move(out));
}

Vector SemifreeModule::d(int n, const Vector& x) const {
  Vector out(dim(n - 1));
  std::size_t off = 0;
  for (std::size_t bi = 0; bi < basis.size(); ++bi) {
    const auto& b = basis[bi];
    const int k = n - b.degree;
    const std::size_t len = base->dim(k);
    if (len == 0) continue;
    Vector c = slice(x, off, len);
    off += len;
    if (is_zero(c)) continue;
    if (k >= 1) place(out, offset(bi, n - 1), base->d(k, c));
    if (!is_zero(b.d)) out = add(out, scale(act(k, c, b.degree - 1, b.d), sign_of(k)));
  }
  return reduce(n - 1, std::move(out));
}

Vector SemifreeModule::comparison(int n, const Vector& x) const {
  Vector out(target->dim(n));
  std::size_t off = 0;
  for (const auto& b : basis) {
    const int k = n - b.degree;
    const std::size_t len = base->dim(k);
    if (len == 0) continue;
    Vector c = slice(x, off, len);
    off += len;
    if (is_zero(c) || b.image.empty()) continue;
    Vector r = target->act(k, c, b.degree, b.image);
    if (!r.empty()) out = add(out, r);
  }
  return target->complex.in_range(n) ? target->complex.reduce(n, std::move(out)) : out;
}

ChainComplex SemifreeModule::complex(int lo, int hi) const {
  ChainComplex c(ground(), lo, hi);
  c.zero_below = basis.empty() || lo <= basis.front().degree;
  for (int n = lo; n <= hi; ++n) {
    auto& grp = c.group(n);
    for (const auto& b : basis) {
      const int k = n - b.degree;
      if (base->dim(k) == 0) continue;
      const auto& o = base->complex.group(k).orders;
      grp.orders.insert(grp.orders.end(), o.begin(), o.end());
    }
    for (std::size_t i = 0; i < grp.orders.size(); ++i) grp.labels.push_back(label(n, i));
  }
  for (int n = lo; n <= hi; ++n) {
    Matrix m(c.dim(n - 1), c.dim(n));
    if (n > lo)
      for (std::size_t j = 0; j < c.dim(n); ++j) m.set_column(j, d(n, unit_vector(c.dim(n), j)));
    c.set_d(n, std::move(m));
  }
  return c;
}

std::string SemifreeModule::label(int n, std::size_t i) const {
  for (const auto& b : basis) {
    const std::size_t len = base->dim(n - b.degree);
    if (i < len) {
      std::string e = base->label(n - b.degree, i);
      return e == "1" ? b.name : e + "." + b.name;
    }
    i -= len;
  }
  return "?";
}

std::string SemifreeModule::check(int N) const {
  for (int n = basis.empty() ? 0 : basis.front().degree; n <= N; ++n)
    for (std::size_t j = 0; j < dim(n); ++j) {
      Vector x = unit_vector(dim(n), j);
      Vector dx = d(n, x);
      if (!is_zero(d(n - 1, dx))) return "d^2 != 0 on " + label(n, j);
      if (target) {
        Vector l = comparison(n - 1, dx);
        Vector r = target->complex.in_range(n) ? target->complex.apply_d(n, comparison(n, x)) : Vector(target->dim(n - 1));
        if (target->dim(n - 1) && l != r) return "comparison map is not a chain map on " + label(n, j);
      }
    }
  return {};
}

DgModule SemifreeModule::as_module(int lo, int hi) const {
  DgModule M;
  M.base = base;
  M.complex = complex(lo, hi);
  auto self = std::make_shared<SemifreeModule>(*this);
  M.action = [self](int a, std::size_t i, int m, std::size_t j) {
    return self->act(a, unit_vector(self->base->dim(a), i), m, unit_vector(self->dim(m), j));
  };
  M.name = "P";
  return M;
}

SemifreeModule semifree_module_resolution(std::shared_ptr<const DgModule> M, int N) {
  if (!M->complex.zero_below) throw std::invalid_argument("semifree_module_resolution: module must be bounded below");
  if (M->base->lo() != 0) throw std::invalid_argument("semifree_module_resolution: base must start in degree 0");
  if (M->complex.hi < N + 1 && !M->complex.zero_above)
    throw std::invalid_argument("semifree_module_resolution: module needed through degree " + std::to_string(N + 1));
  SemifreeModule P(M->base, M);
  P.validity = N;
  const Ground& g = M->ground();
  std::size_t count = 0;
  for (int d = M->complex.lo; d <= N; ++d) {
    ConeBlocks B;
    B.target_dim = [&](int n) { return M->dim(n); };
    B.target_orders = [&](int n) { return M->complex.in_range(n) ? M->complex.group(n).orders : std::vector<Integer>{}; };
    B.target_d = [&](int n) { return M->complex.d(n); };
    B.source_dim = [&](int n) { return P.dim(n); };
    B.source_orders = [&](int n) {
      std::vector<Integer> o;
      for (const auto& b : P.basis)
        if (P.base->dim(n - b.degree)) {
          const auto& x = P.base->complex.group(n - b.degree).orders;
          o.insert(o.end(), x.begin(), x.end());
        }
      return o;
    };
    B.source_d = [&](int n) {
      Matrix m(P.dim(n - 1), P.dim(n));
      for (std::size_t j = 0; j < P.dim(n); ++j) m.set_column(j, P.d(n, unit_vector(P.dim(n), j)));
      return m;
    };
    B.map = [&](int n) {
      Matrix m(M->dim(n), P.dim(n));
      for (std::size_t j = 0; j < P.dim(n); ++j) m.set_column(j, P.comparison(n, unit_vector(P.dim(n), j)));
      return m;
    };
    ChainComplex K = cone(g, B, d);
    GradedGroup G(K, d, d);
    const std::size_t a = M->dim(d);
    for (std::size_t i = 0; i < G.size(d); ++i) {
      const Vector& rep = G.representative(d, i);
      Vector y = slice(rep, 0, a), x = slice(rep, a, rep.size() - a);
      Integer u = is_zero(x) ? leading_normalizer(scale(y, Integer(-1)), g) : leading_normalizer(x, g);
      x = P.reduce(d - 1, scale(x, u));
      y = scale(y, -u);
      if (M->complex.in_range(d)) y = M->complex.reduce(d, std::move(y));
      P.add_basis("b" + std::to_string(count++), d, x, y);
    }
  }
  return P;
}

// ---------------------------------------------------------------- Hom

Vector HomComplex::value(int k, const Vector& f, std::size_t b) const {
  const auto& lay = layout.at(static_cast<std::size_t>(k - complex.lo));
  for (std::size_t s = 0; s < lay.size(); ++s)
    if (lay[s].first == b) {
      std::size_t end = s + 1 < lay.size() ? lay[s + 1].second : f.size();
      return slice(f, lay[s].second, end - lay[s].second);
    }
  return {};
}

Vector HomComplex::from_values(int k, const std::vector<Vector>& values) const {
  Vector f(complex.dim(k));
  for (const auto& [b, off] : layout.at(static_cast<std::size_t>(k - complex.lo)))
    if (b < values.size() && !values[b].empty()) place(f, off, values[b]);
  return f;
}

Vector HomComplex::evaluate(const SemifreeModule& P, const DgModule& M, int k, const Vector& f, int n, const Vector& x) const {
  Vector out(M.dim(n + k));
  std::size_t off = 0;
  for (std::size_t bi = 0; bi < P.basis.size(); ++bi) {
    const auto& b = P.basis[bi];
    const int j = n - b.degree;
    const std::size_t len = P.base->dim(j);
    if (len == 0) continue;
    Vector c = slice(x, off, len);
    off += len;
    if (is_zero(c)) continue;
    Vector fb = value(k, f, bi);
    if (fb.empty() || is_zero(fb)) continue;
    Vector r = M.act(j, c, b.degree + k, fb);
    if (!r.empty()) out = add(out, scale(r, sign_of(static_cast<long>(k) * j)));
  }
  return M.complex.in_range(n + k) ? M.complex.reduce(n + k, std::move(out)) : out;
}

HomComplex hom_complex(const SemifreeModule& P, const DgModule& M, int lo, int hi) {
  HomComplex H;
  H.complex = ChainComplex(M.ground(), lo, hi);
  H.complex.zero_below = false;
  H.layout.resize(static_cast<std::size_t>(std::max(0, hi - lo + 1)));
  const auto& mc = M.complex;
  for (int k = lo; k <= hi; ++k) {
    auto& lay = H.layout[static_cast<std::size_t>(k - lo)];
    auto& grp = H.complex.group(k);
    for (std::size_t bi = 0; bi < P.basis.size(); ++bi) {
      const int t = P.basis[bi].degree + k;
      if (!mc.in_range(t)) {
        if ((t > mc.hi && mc.zero_above) || (t < mc.lo && mc.zero_below)) continue;
        throw std::out_of_range("hom_complex: target needed in degree " + std::to_string(t));
      }
      if (mc.dim(t) == 0) continue;
      lay.push_back({bi, grp.orders.size()});
      const auto& o = mc.group(t).orders;
      for (std::size_t i = 0; i < o.size(); ++i) {
        grp.orders.push_back(o[i]);
        grp.labels.push_back(P.basis[bi].name + "->" + (i < mc.group(t).labels.size() ? mc.group(t).labels[i] : std::to_string(i)));
      }
    }
  }
  for (int k = lo; k <= hi; ++k) {
    Matrix m(H.complex.dim(k - 1), H.complex.dim(k));
    if (k > lo)
      for (std::size_t col = 0; col < H.complex.dim(k); ++col) {
        Vector f = unit_vector(H.complex.dim(k), col);
        std::vector<Vector> vals(P.basis.size());
        for (const auto& [bi, off] : H.layout[static_cast<std::size_t>(k - 1 - lo)]) {
          (void)off;
          const auto& b = P.basis[bi];
          Vector fb = H.value(k, f, bi);
          Vector v(M.dim(b.degree + k - 1));
          if (!fb.empty()) {
            Vector dfb = mc.apply_d(b.degree + k, fb);
            if (!dfb.empty()) v = add(v, dfb);
          }
          if (!is_zero(b.d)) v = add(v, scale(H.evaluate(P, M, k, f, b.degree - 1, b.d), -sign_of(k)));
          vals[bi] = mc.reduce(b.degree + k - 1, v);
        }
        m.set_column(col, H.from_values(k - 1, vals));
      }
    H.complex.set_d(k, std::move(m));
  }
  return H;
}

EndomorphismDga endomorphism_dga(std::shared_ptr<const SemifreeModule> P, int K, int hi, int top) {
  if (P->basis.empty()) {
    EndomorphismDga E;
    E.dga = TruncatedDga(ChainComplex(P->ground(), 0, 0), [](int, std::size_t, int, std::size_t) { return Vector{}; }, Vector{});
    E.dga.complex.zero_above = true;
    E.valid_lo = 0;
    E.valid_hi = 0;
    return E;
  }
  if (top < K + hi) throw std::invalid_argument("endomorphism_dga: module needed through degree " + std::to_string(K + hi));
  auto src = std::make_shared<SemifreeModule>(*P);
  while (!src->basis.empty() && src->basis.back().degree > K) src->basis.pop_back();
  const int lo_p = P->basis.front().degree;
  auto M = std::make_shared<DgModule>(P->as_module(lo_p, top));
  const int lo = lo_p - K - 1;
  EndomorphismDga E;
  E.hom = hom_complex(*src, *M, lo, hi);
  auto hom = std::make_shared<HomComplex>(E.hom);
  BasisProduct prod = [src, M, hom](int j, std::size_t u, int k, std::size_t v) -> Vector {
    Vector f = unit_vector(hom->complex.dim(j), u), g = unit_vector(hom->complex.dim(k), v);
    std::vector<Vector> vals(src->basis.size());
    for (const auto& [bi, off] : hom->layout[static_cast<std::size_t>(j + k - hom->complex.lo)]) {
      (void)off;
      const int deg = src->basis[bi].degree;
      Vector gb = hom->value(k, g, bi);
      if (gb.empty()) gb = Vector(M->dim(deg + k));
      // values on basis elements beyond the source are treated as zero
      Vector x = gb;
      x.resize(src->dim(deg + k));
      vals[bi] = hom->evaluate(*src, *M, j, f, deg + k, x);
    }
    return hom->from_values(j + k, vals);
  };
  std::vector<Vector> id(src->basis.size());
  for (std::size_t b = 0; b < src->basis.size(); ++b)
    id[b] = src->element(b, src->basis[b].degree, src->base->unit);
  Vector unit = E.hom.complex.in_range(0) ? E.hom.from_values(0, id) : Vector{};
  E.dga = TruncatedDga(E.hom.complex, prod, unit);
  E.dga.name = "End(P)";
  int r_top = lo_p;
  if (P->target && P->target->complex.zero_above) r_top = P->target->complex.hi;
  E.valid_lo = P->target && P->target->complex.zero_above ? std::max(lo + 1, r_top + 1 - K) : lo + 1;
  E.valid_hi = hi - 1;
  return E;
}

// ---------------------------------------------------------------- derived tensor

TruncatedDga koszul_model(long p, int N) {
  DgaPresentation k;
  k.name = "K(" + std::to_string(p) + ")";
  k.ground = Ground::integers();
  int e = k.add_generator("eps", 1, Polynomial::constant(Integer(p)));
  k.relations.push_back(Polynomial::word({e, e}));
  return realize(k, N);
}

bool degreewise_free(const TruncatedDga& A) {
  if (A.ground().is_field()) return true;
  for (int n = A.lo(); n <= A.top(); ++n)
    for (const auto& o : A.complex.group(n).orders)
      if (!o.is_zero()) return false;
  return true;
}

DerivedTensor derived_tensor(const TruncatedDga& A, const TruncatedDga& B, int N, const RealizeOptions& opt) {
  DerivedTensor r;
  r.validity = N;
  if (degreewise_free(A)) {
    r.path = "left factor free";
    r.product = tensor_dga(A, B, N + 1);
  } else if (degreewise_free(B)) {
    r.path = "right factor free";
    r.product = tensor_dga(A, B, N + 1);
  } else {
    r.path = "resolved left factor";
    // exact through N+1 so that degree N of the tensor product is right
    SemifreeDga S = semifree_replacement(A, N + 1, opt);
    RealizeOptions quiet = opt;
    quiet.verify = false;
    TruncatedDga Q = S.realize(N + 1, quiet);
    Q.name = A.name;
    r.product = tensor_dga(Q, B, N + 1);
  }
  r.product.name = A.name + " (x)L " + B.name;
  r.ring = homology_ring(r.product, N + 1);
  return r;
}

Distinction distinguish(const TruncatedDga& A, const TruncatedDga& B, int N, const RealizeOptions& opt) {
  Distinction out;
  out.checked_through = N;
  if (A.ground() != B.ground()) throw std::invalid_argument("distinguish: different ground rings");
  HomologyRing RA = homology_ring(A, N + 1), RB = homology_ring(B, N + 1);
  const int top = std::min(RA.hi(), RB.hi());
  out.checked_through = top;
  for (int n = 0; n <= top; ++n)
    if (RA.factors(n) != RB.factors(n)) {
      out.distinguished = true;
      out.kind = "groups";
      out.witness = "H_" + std::to_string(n) + ": " + group_name(RA.factors(n), A.ground()) + " vs " +
                    group_name(RB.factors(n), B.ground());
      return out;
    }
  if (auto d = ring_fingerprint(RA).compare(ring_fingerprint(RB))) {
    out.distinguished = true;
    out.kind = "ring";
    out.witness = d->first + ": " + d->second;
    return out;
  }
  if (A.ground().is_field()) return out;
  std::set<long> primes;
  for (const auto* R : {&RA, &RB})
    for (int n = 0; n <= top; ++n)
      for (const auto& f : R->factors(n)) {
        if (f.is_zero() || !f.fits_long()) continue;
        long x = f.to_long();
        for (long p = 2; p * p <= x; ++p)
          while (x % p == 0) {
            primes.insert(p);
            x /= p;
          }
        if (x > 1) primes.insert(x);
      }
  for (long p : primes) {
    TruncatedDga K = koszul_model(p, N + 1);
    DerivedTensor TA = derived_tensor(A, K, N, opt), TB = derived_tensor(B, K, N, opt);
    if (auto d = ring_fingerprint(TA.ring).compare(ring_fingerprint(TB.ring))) {
      out.distinguished = true;
      out.kind = "derived mod " + std::to_string(p) + " ring";
      out.witness = d->first + ": " + d->second;
      return out;
    }
  }
  return out;
}

}  // namespace dgatk
