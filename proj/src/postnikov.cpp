#include "dgatk/postnikov.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

namespace {

Vector reduce_module(const Bimodule& M, const Ground& g, Vector v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (g.is_field())
      v[i] = g.normalize(v[i]);
    else if (!M.orders[i].is_zero())
      v[i] = floor_mod(v[i], M.orders[i]);
  }
  return v;
}

std::vector<Vector> all_elements(const std::vector<Integer>& orders, const Ground& g, std::size_t cap, const std::string& what) {
  std::vector<long> radix;
  std::size_t total = 1;
  for (const auto& o : orders) {
    long r = g.is_field() ? g.p : (o.is_zero() ? 0 : (o.fits_long() ? o.to_long() : 0));
    if (r <= 0) throw HypothesisError("infinite search space: " + what + " has a free summand");
    radix.push_back(r);
    total *= static_cast<std::size_t>(r);
    if (total > cap) throw ResourceError("enumeration of " + what + " exceeds the cap of " + std::to_string(cap));
  }
  std::vector<Vector> out;
  out.reserve(total);
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

Vector pad(const Vector& v, std::size_t n) {
  Vector r(n);
  for (std::size_t i = 0; i < v.size() && i < n; ++i) r[i] = v[i];
  return r;
}

void place(Vector& out, std::size_t off, const Vector& block) {
  for (std::size_t i = 0; i < block.size(); ++i) out[off + i] += block[i];
}

Vector slice(const Vector& v, std::size_t off, std::size_t len) {
  return Vector(v.begin() + static_cast<std::ptrdiff_t>(off), v.begin() + static_cast<std::ptrdiff_t>(off + len));
}

// C with copies of M attached in the given degrees; C_0 acts on each copy, positive degrees by zero.
struct Blocks {
  std::shared_ptr<const TruncatedDga> C;
  Bimodule M;
  std::vector<int> degrees;

  std::size_t base_dim(int n) const { return C->complex.in_range(n) ? C->dim(n) : 0; }
  std::size_t offset(int n, std::size_t b) const {
    std::size_t off = base_dim(n);
    for (std::size_t k = 0; k < b; ++k)
      if (degrees[k] == n) off += M.size();
    return off;
  }
  std::size_t dim(int n) const {
    std::size_t d = base_dim(n);
    for (int x : degrees)
      if (x == n) d += M.size();
    return d;
  }
  // (block, index) for an index of degree n; block -1 is C.
  std::pair<int, std::size_t> locate(int n, std::size_t i) const {
    if (i < base_dim(n)) return {-1, i};
    for (std::size_t b = 0; b < degrees.size(); ++b) {
      if (degrees[b] != n) continue;
      std::size_t off = offset(n, b);
      if (i < off + M.size()) return {static_cast<int>(b), i - off};
    }
    throw std::out_of_range("basis index outside the attached blocks");
  }
};

TruncatedDga attach_blocks(const Blocks& B, const std::vector<std::string>& prefixes, int top, bool zero_above,
                           const std::function<void(int, Matrix&)>& extra_d) {
  const TruncatedDga& C = *B.C;
  const Ground& g = C.ground();
  ChainComplex c(g, 0, top);
  c.zero_above = zero_above;
  for (int n = 0; n <= top; ++n) {
    auto& grp = c.group(n);
    if (C.complex.in_range(n)) grp = C.complex.group(n);
    for (std::size_t i = grp.labels.size(); i < grp.orders.size(); ++i) grp.labels.push_back(C.label(n, i));
    for (std::size_t b = 0; b < B.degrees.size(); ++b) {
      if (B.degrees[b] != n) continue;
      for (std::size_t i = 0; i < B.M.size(); ++i) {
        grp.orders.push_back(g.is_field() ? Integer(0) : B.M.orders[i]);
        std::string l = i < B.M.labels.size() ? B.M.labels[i] : "m" + std::to_string(i);
        grp.labels.push_back(prefixes[b] + l);
      }
    }
  }
  for (int n = 0; n <= top; ++n) {
    Matrix d(n > 0 ? B.dim(n - 1) : 0, B.dim(n));
    if (n > 0 && C.complex.in_range(n) && C.complex.in_range(n - 1)) {
      Matrix cd = C.complex.d(n);
      for (std::size_t i = 0; i < cd.rows(); ++i)
        for (std::size_t j = 0; j < cd.cols(); ++j) d(i, j) = cd(i, j);
    }
    if (extra_d) extra_d(n, d);
    c.set_d(n, std::move(d));
  }
  BasisProduct prod = [B](int a, std::size_t i, int b, std::size_t j) -> Vector {
    Vector r(B.dim(a + b));
    auto [ba, ia] = B.locate(a, i);
    auto [bb, ib] = B.locate(b, j);
    if (ba < 0 && bb < 0) {
      if (B.C->complex.in_range(a + b)) place(r, 0, B.C->basis_product(a, ia, b, ib));
    } else if (ba < 0 && bb >= 0) {
      if (a == 0) place(r, B.offset(b, static_cast<std::size_t>(bb)), B.M.left.at(ia).column(ib));
    } else if (ba >= 0 && bb < 0) {
      if (b == 0) place(r, B.offset(a, static_cast<std::size_t>(ba)), B.M.right.at(ib).column(ia));
    }
    return r;
  };
  TruncatedDga r(std::move(c), prod, pad(C.unit, B.dim(0)));
  return r;
}

// All basis-level checks that f is a unital chain algebra map S -> T in degrees 0..top.
std::string check_dga_map(const TruncatedDga& S, const TruncatedDga& T, int top, const std::function<Vector(int, const Vector&)>& f) {
  if (T.complex.reduce(0, f(0, S.unit)) != T.complex.reduce(0, T.unit)) return "unit not preserved";
  for (int n = 1; n <= top; ++n)
    for (std::size_t j = 0; j < S.dim(n); ++j) {
      Vector x = unit_vector(S.dim(n), j);
      if (T.d(n, f(n, x)) != T.complex.reduce(n - 1, f(n - 1, S.d(n, x)))) return "not a chain map on " + S.label(n, j);
    }
  for (int a = 0; a <= top; ++a)
    for (int b = 0; a + b <= top; ++b)
      for (std::size_t i = 0; i < S.dim(a); ++i)
        for (std::size_t j = 0; j < S.dim(b); ++j) {
          Vector x = unit_vector(S.dim(a), i), y = unit_vector(S.dim(b), j);
          Vector l = T.complex.reduce(a + b, f(a + b, S.multiply(a, x, b, y)));
          Vector r = T.multiply(a, f(a, x), b, f(b, y));
          if (l != r) return "not multiplicative on " + S.label(a, i) + " * " + S.label(b, j);
        }
  return {};
}

std::vector<std::size_t> union_find_roots(std::vector<std::size_t>& parent) {
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::size_t> roots(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) roots[i] = find(i);
  return roots;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

// Invariant factors of a finite abelian group from its addition table.
std::vector<Integer> invariant_factors(const std::vector<std::vector<std::size_t>>& sum, std::size_t zero) {
  const std::size_t n = sum.size();
  auto times = [&](std::size_t x, long k) {
    std::size_t r = zero;
    for (long i = 0; i < k; ++i) r = sum[r][x];
    return r;
  };
  std::vector<std::vector<long>> exps;  // per prime, descending exponents
  std::vector<long> primes = prime_factors(static_cast<long>(n));
  for (long p : primes) {
    std::vector<long> a{0};
    long pk = 1;
    while (true) {
      pk *= p;
      std::size_t count = 0;
      for (std::size_t x = 0; x < n; ++x)
        if (times(x, pk) == zero) ++count;
      long e = 0;
      for (std::size_t c = count; c > 1; c /= static_cast<std::size_t>(p)) ++e;
      if (e == a.back()) break;
      a.push_back(e);
    }
    // number of cyclic factors of order >= p^k is a_k - a_{k-1}
    std::vector<long> ex;
    for (std::size_t k = 1; k < a.size(); ++k) {
      long atleast = a[k] - a[k - 1];
      long next = k + 1 < a.size() ? a[k + 1] - a[k] : 0;
      for (long i = 0; i < atleast - next; ++i) ex.push_back(static_cast<long>(k));
    }
    std::sort(ex.rbegin(), ex.rend());
    exps.push_back(ex);
  }
  std::size_t len = 0;
  for (const auto& e : exps) len = std::max(len, e.size());
  std::vector<Integer> out(len, Integer(1));
  for (std::size_t q = 0; q < primes.size(); ++q)
    for (std::size_t i = 0; i < exps[q].size(); ++i) {
      Integer pe(1);
      for (long k = 0; k < exps[q][i]; ++k) pe *= Integer(primes[q]);
      out[i] *= pe;
    }
  std::reverse(out.begin(), out.end());
  return out;
}

Matrix torsion_block(const std::vector<Integer>& orders, const Ground& g) {
  std::vector<Vector> cols;
  if (!g.is_field())
    for (std::size_t i = 0; i < orders.size(); ++i)
      if (!orders[i].is_zero()) cols.push_back(scale(unit_vector(orders.size(), i), orders[i]));
  return Matrix::from_columns(orders.size(), cols);
}

// Quotient data used by brutal_truncation in degree n.
QuotientStructure top_quotient(const TruncatedDga& A, int n) {
  Matrix bnd = A.complex.d(n + 1);
  Matrix rel = A.complex.group(n).relations();
  Matrix all = bnd.cols() ? (rel.cols() ? bnd.hconcat(rel) : bnd) : rel;
  if (all.rows() != A.dim(n)) all = Matrix(A.dim(n), 0);
  return quotient_structure(A.dim(n), all, A.ground());
}

}  // namespace

// ---------------------------------------------------------------- square-zero extensions

Bimodule scalar_bimodule(const TruncatedDga& C, std::vector<Integer> orders) {
  if (C.dim(0) != 1) throw HypothesisError("scalar_bimodule: degree 0 of the base is not spanned by the unit");
  const Ground& g = C.ground();
  Integer u = C.unit.at(0);
  Integer s = g.is_field() ? g.inverse(u) : u;
  if (!g.is_unit(u)) throw HypothesisError("scalar_bimodule: the unit does not span degree 0");
  if (g.is_field()) std::fill(orders.begin(), orders.end(), Integer(0));
  Bimodule M;
  M.orders = orders;
  Matrix act(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) act(i, i) = s;
  M.left = {act};
  M.right = {act};
  for (std::size_t i = 0; i < orders.size(); ++i) M.labels.push_back("m" + std::to_string(i));
  return M;
}

Vector SquareZeroDga::include(int n, const Vector& c) const { return pad(c, dga.dim(n)); }

Vector SquareZeroDga::project(int n, const Vector& x) const { return slice(x, 0, base->complex.in_range(n) ? base->dim(n) : 0); }

Vector SquareZeroDga::module_part(const Vector& x) const {
  return slice(x, base->complex.in_range(shift) ? base->dim(shift) : 0, module.size());
}

SquareZeroDga square_zero_extension(const TruncatedDga& C, const Bimodule& M, int m) {
  if (m < 1) throw std::invalid_argument("square_zero_extension: the shift must be positive");
  if (C.lo() != 0) throw std::invalid_argument("square_zero_extension: the base must start in degree 0");
  if (!C.complex.zero_above && C.top() < m + 1)
    throw std::invalid_argument("square_zero_extension: base needed through degree " + std::to_string(m + 1));
  if (M.left.size() != C.dim(0) || M.right.size() != C.dim(0))
    throw std::invalid_argument("square_zero_extension: one action matrix per basis element of degree 0 expected");
  SquareZeroDga D;
  D.base = std::make_shared<TruncatedDga>(C);
  D.module = M;
  if (C.ground().is_field()) std::fill(D.module.orders.begin(), D.module.orders.end(), Integer(0));
  D.shift = m;
  Blocks B{D.base, D.module, {m}};
  const int top = std::max(C.top(), m);
  D.dga = attach_blocks(B, {""}, top, C.complex.zero_above || C.top() > m, {});
  D.dga.name = (C.name.empty() ? "C" : C.name) + " v S^" + std::to_string(m) + "M";
  return D;
}

// ---------------------------------------------------------------- path object

PathObjectDga path_object(std::shared_ptr<const SquareZeroDga> D) {
  PathObjectDga P;
  P.target = D;
  const int m = D->shift;
  Blocks B{D->base, D->module, {m, m, m - 1}};
  const std::size_t k = D->module.size();
  const Integer s = (m % 2 == 0) ? Integer(-1) : Integer(1);  // -(-1)^m
  auto extra = [B, m, k, s](int n, Matrix& d) {
    if (n != m) return;
    std::size_t a = B.offset(m - 1, 2), h0 = B.offset(m, 0), h1 = B.offset(m, 1);
    for (std::size_t i = 0; i < k; ++i) {
      d(a + i, h0 + i) = s;
      d(a + i, h1 + i) = -s;
    }
  };
  P.dga = attach_blocks(B, {"h0.", "h1.", "a."}, D->dga.top(), D->dga.complex.zero_above, extra);
  P.dga.name = "path(" + D->dga.name + ")";
  return P;
}

Vector PathObjectDga::evaluate(int end, int n, const Vector& x) const {
  const SquareZeroDga& D = *target;
  const std::size_t c = D.base->complex.in_range(n) ? D.base->dim(n) : 0;
  Vector r = pad(slice(x, 0, c), D.dga.dim(n));
  if (n == D.shift) place(r, c, slice(x, c + static_cast<std::size_t>(end) * D.module.size(), D.module.size()));
  return D.dga.complex.reduce(n, r);
}

Vector PathObjectDga::constant(int n, const Vector& x) const {
  const SquareZeroDga& D = *target;
  const std::size_t c = D.base->complex.in_range(n) ? D.base->dim(n) : 0;
  Vector r = pad(slice(x, 0, c), dga.dim(n));
  if (n == D.shift) {
    Vector mu = slice(x, c, D.module.size());
    place(r, c, mu);
    place(r, c + D.module.size(), mu);
  }
  return r;
}

std::string PathObjectDga::check() const {
  const int top = dga.top();
  for (const auto& w : {dga.check_leibniz(), dga.check_associativity(), dga.check_unit()})
    if (!w.empty()) return "path object: " + w;
  for (int end = 0; end < 2; ++end) {
    auto w = check_dga_map(dga, target->dga, top, [&](int n, const Vector& x) { return evaluate(end, n, x); });
    if (!w.empty()) return "evaluation " + std::to_string(end) + ": " + w;
  }
  auto w = check_dga_map(target->dga, dga, top, [&](int n, const Vector& x) { return constant(n, x); });
  if (!w.empty()) return "constant path: " + w;
  for (int n = 0; n <= top; ++n)
    for (std::size_t j = 0; j < target->dga.dim(n); ++j) {
      Vector x = unit_vector(target->dga.dim(n), j);
      for (int end = 0; end < 2; ++end)
        if (evaluate(end, n, constant(n, x)) != target->dga.complex.reduce(n, x)) return "evaluation after constant path is not the identity";
    }
  return {};
}

// ---------------------------------------------------------------- maps

std::vector<Vector> degree_elements(const TruncatedDga& T, int n, std::size_t cap) {
  if (!T.complex.in_range(n)) {
    if (T.complex.zero_above && n > T.top()) return {Vector{}};
    throw std::out_of_range("degree_elements: degree " + std::to_string(n) + " outside the target's range");
  }
  return all_elements(T.complex.group(n).orders, T.ground(), cap, "degree " + std::to_string(n) + " of the target");
}

Vector map_polynomial(const DgaPresentation& Q, const TruncatedDga& T, const std::vector<Vector>& images, int n,
                      const Polynomial& p) {
  if (T.complex.zero_above && n > T.top()) return {};
  Vector r(T.dim(n));
  for (const auto& [w, c] : p.terms()) {
    Vector acc = T.unit;
    int deg = 0;
    bool zero = false;
    for (int x : w) {
      const int dx = Q.generators[static_cast<std::size_t>(x)].degree;
      if (!T.complex.in_range(dx)) {
        zero = true;
        break;
      }
      acc = T.multiply(deg, acc, dx, images.at(static_cast<std::size_t>(x)));
      deg += dx;
      if (acc.empty()) {
        zero = true;
        break;
      }
    }
    if (!zero) r = add(r, scale(acc, c));
  }
  return T.complex.reduce(n, r);
}

std::vector<ChainAlgebraMap> enumerate_dga_maps(const DgaPresentation& Q, const TruncatedDga& T, int N,
                                                const CandidateFn& candidates, std::size_t cap) {
  std::vector<std::size_t> gens;
  std::vector<std::vector<Vector>> cand;
  for (std::size_t g = 0; g < Q.generators.size(); ++g) {
    const int deg = Q.generators[g].degree;
    if (deg > N) continue;
    std::optional<std::vector<Vector>> c;
    if (candidates) c = candidates(g);
    if (!c) c = degree_elements(T, deg, cap);
    gens.push_back(g);
    cand.push_back(std::move(*c));
  }
  for (std::size_t g = 0; g < Q.generators.size(); ++g)
    if (Q.generators[g].degree <= N)
      for (const auto& [w, c] : Q.differentials[g].terms())
        for (int x : w)
          if (Q.generators[static_cast<std::size_t>(x)].degree > N) throw std::logic_error("differential uses a later generator");
  std::vector<ChainAlgebraMap> out;
  std::vector<Vector> images(Q.generators.size());
  std::size_t visited = 0;
  std::function<void(std::size_t)> go = [&](std::size_t k) {
    if (k == gens.size()) {
      ChainAlgebraMap f;
      for (std::size_t g : gens) f.images.push_back(images[g]);
      out.push_back(std::move(f));
      return;
    }
    const std::size_t g = gens[k];
    const int deg = Q.generators[g].degree;
    for (const auto& y : cand[k]) {
      if (++visited > cap) throw ResourceError("map enumeration exceeds the cap of " + std::to_string(cap));
      images[g] = y;
      Vector rhs = map_polynomial(Q, T, images, deg - 1, Q.differentials[g]);
      bool ok;
      if (T.complex.in_range(deg - 1)) {
        Vector lhs = T.complex.in_range(deg) ? T.d(deg, y) : Vector(T.dim(deg - 1));
        ok = lhs == pad(rhs, T.dim(deg - 1));
      } else {
        ok = is_zero(rhs);
      }
      if (ok) go(k + 1);
    }
  };
  go(0);
  return out;
}

// ---------------------------------------------------------------- homotopy classes

Vector HoClassGroup::module_part(const ChainAlgebraMap& f) const {
  Vector r;
  for (std::size_t g : module_generators) {
    Vector mu = target->module_part(f.images.at(g));
    r.insert(r.end(), mu.begin(), mu.end());
  }
  return r;
}

std::optional<std::size_t> HoClassGroup::class_of_module_part(const Vector& mu) const {
  const std::size_t k = target->module.size();
  Vector r;
  for (std::size_t b = 0; b < module_generators.size(); ++b) {
    Vector part = reduce_module(target->module, target->dga.ground(), slice(mu, b * k, k));
    r.insert(r.end(), part.begin(), part.end());
  }
  auto it = index.find(r);
  if (it == index.end()) return std::nullopt;
  return class_of[it->second];
}

std::string HoClassGroup::describe(std::size_t c) const {
  const ChainAlgebraMap& f = maps.at(representative.at(c));
  const auto& M = target->module;
  std::string out;
  for (std::size_t g : module_generators) {
    Vector mu = target->module_part(f.images.at(g));
    std::string val;
    for (std::size_t i = 0; i < mu.size(); ++i)
      if (!mu[i].is_zero())
        val += (val.empty() ? "" : " + ") + (mu[i].is_one() ? "" : mu[i].str() + "*") +
               (i < M.labels.size() ? M.labels[i] : "m" + std::to_string(i));
    out += (out.empty() ? "" : ", ") + source->presentation.generators[g].name + " -> " + (val.empty() ? "0" : val);
  }
  return out.empty() ? "0" : out;
}

HoClassGroup homotopy_classes(std::shared_ptr<const SemifreeDga> Q, std::shared_ptr<const SquareZeroDga> D, std::size_t cap) {
  HoClassGroup G;
  G.source = Q;
  G.target = D;
  const int m = D->shift;
  const auto& pres = Q->presentation;
  const Ground& gr = D->dga.ground();
  if (Q->target->dim(0) != D->base->dim(0) || Q->target->top() < std::min(D->base->top(), m + 1))
    throw std::invalid_argument("homotopy_classes: the model does not map to the base of the extension");
  for (std::size_t g = 0; g < pres.generators.size(); ++g)
    if (pres.generators[g].degree == m) G.module_generators.push_back(g);
  const auto module_elems = all_elements(D->module.orders, gr, cap, "the module");

  auto base_image = [&](std::size_t g, std::size_t dim) {
    int deg = pres.generators[g].degree;
    Vector c = D->base->complex.in_range(deg) ? Q->images[g] : Vector{};
    return pad(c, dim);
  };

  auto dmaps = enumerate_dga_maps(
      pres, D->dga, m + 1,
      [&](std::size_t g) -> std::optional<std::vector<Vector>> {
        int deg = pres.generators[g].degree;
        Vector b = base_image(g, D->dga.dim(deg));
        if (deg != m) return std::vector<Vector>{b};
        std::vector<Vector> out;
        for (const auto& mu : module_elems) {
          Vector y = b;
          place(y, D->module_offset(), mu);
          out.push_back(D->dga.complex.reduce(deg, y));
        }
        return out;
      },
      cap);

  auto P = path_object(D);
  auto pmaps = enumerate_dga_maps(
      pres, P.dga, m + 1,
      [&](std::size_t g) -> std::optional<std::vector<Vector>> {
        int deg = pres.generators[g].degree;
        Vector b = base_image(g, P.dga.dim(deg));
        const std::size_t c = D->base->complex.in_range(deg) ? D->base->dim(deg) : 0;
        std::vector<Vector> out;
        if (deg == m) {
          for (const auto& h0 : module_elems)
            for (const auto& h1 : module_elems) {
              Vector y = b;
              place(y, c, h0);
              place(y, c + D->module.size(), h1);
              out.push_back(P.dga.complex.reduce(deg, y));
            }
        } else if (deg == m - 1) {
          for (const auto& a : module_elems) {
            Vector y = b;
            place(y, c, a);
            out.push_back(P.dga.complex.reduce(deg, y));
          }
        } else {
          out.push_back(b);
        }
        return out;
      },
      cap);

  // maps are determined by their generator images of degree <= m+1; store them full length
  std::vector<std::size_t> low;
  for (std::size_t g = 0; g < pres.generators.size(); ++g)
    if (pres.generators[g].degree <= m + 1) low.push_back(g);
  for (auto& f : dmaps) {
    ChainAlgebraMap full;
    full.images.resize(pres.generators.size());
    for (std::size_t g = 0; g < pres.generators.size(); ++g) full.images[g] = Vector(D->dga.complex.in_range(pres.generators[g].degree) ? D->dga.dim(pres.generators[g].degree) : 0);
    for (std::size_t k = 0; k < low.size(); ++k) full.images[low[k]] = f.images[k];
    G.maps.push_back(std::move(full));
  }
  for (std::size_t i = 0; i < G.maps.size(); ++i) G.index.emplace(G.module_part(G.maps[i]), i);
  if (G.index.size() != G.maps.size()) throw std::logic_error("homotopy_classes: maps are not determined by their module parts");

  std::vector<std::size_t> parent(G.maps.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto key_of = [&](const ChainAlgebraMap& F, int end) {
    Vector r;
    for (std::size_t g : G.module_generators) {
      std::size_t k = static_cast<std::size_t>(std::find(low.begin(), low.end(), g) - low.begin());
      Vector mu = D->module_part(P.evaluate(end, m, F.images[k]));
      r.insert(r.end(), mu.begin(), mu.end());
    }
    return r;
  };
  for (const auto& F : pmaps) {
    auto a = G.index.find(key_of(F, 0)), b = G.index.find(key_of(F, 1));
    if (a == G.index.end() || b == G.index.end()) throw std::logic_error("homotopy_classes: an evaluated path is not a map");
    parent[find_root(parent, a->second)] = find_root(parent, b->second);
  }
  auto roots = union_find_roots(parent);
  std::map<std::size_t, std::size_t> cls;
  G.class_of.resize(G.maps.size());
  for (const auto& [key, i] : G.index) {  // smallest module part first
    auto it = cls.find(roots[i]);
    if (it == cls.end()) {
      it = cls.emplace(roots[i], G.representative.size()).first;
      G.representative.push_back(i);
    }
    G.class_of[i] = it->second;
  }
  G.zero = *G.class_of_module_part(Vector(G.module_generators.size() * D->module.size()));

  const std::size_t n = G.order();
  G.sum.assign(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      auto c = G.class_of_module_part(add(G.module_part(G.maps[G.representative[a]]), G.module_part(G.maps[G.representative[b]])));
      if (!c) throw std::logic_error("homotopy_classes: sum of maps is not a map");
      G.sum[a][b] = *c;
    }
  if (G.maps.size() <= 400)
    for (std::size_t i = 0; i < G.maps.size(); ++i)
      for (std::size_t j = 0; j < G.maps.size(); ++j) {
        auto c = G.class_of_module_part(add(G.module_part(G.maps[i]), G.module_part(G.maps[j])));
        if (!c || *c != G.sum[G.class_of[i]][G.class_of[j]]) throw std::logic_error("homotopy_classes: addition is not well defined");
      }
  G.factors = invariant_factors(G.sum, G.zero);
  return G;
}

HoClassGroup homotopy_classes(const TruncatedDga& C, const Bimodule& M, int m, std::size_t cap) {
  auto Q = std::make_shared<SemifreeDga>(semifree_replacement(C, m + 1));
  auto D = std::make_shared<SquareZeroDga>(square_zero_extension(C, M, m));
  return homotopy_classes(Q, D, cap);
}

// ---------------------------------------------------------------- k-invariants

PostnikovTarget postnikov_target(const TruncatedDga& X, int n) {
  if (n < 0) throw std::invalid_argument("postnikov_target: n must be nonnegative");
  PostnikovTarget T;
  T.base = brutal_truncation(X, n);
  const Ground& g = X.ground();
  for (int j = 0; j < n; ++j) T.to_base.push_back(Matrix::identity(X.dim(j)));
  QuotientStructure qs = top_quotient(X, n);
  T.to_base.push_back(qs.projection);
  TruncatedDga Xp = brutal_truncation(X, n + 1);
  GradedGroup H(Xp.complex, n + 1, n + 1);
  const std::size_t k = H.size(n + 1);
  T.module.orders = H.factors(n + 1);
  for (std::size_t i = 0; i < T.base.dim(0); ++i) {
    Vector lift = n == 0 ? qs.lift_generator(i) : unit_vector(X.dim(0), i);
    Matrix L(k, k), R(k, k);
    for (std::size_t c = 0; c < k; ++c) {
      const Vector& z = H.representative(n + 1, c);
      auto l = H.classify(n + 1, Xp.multiply(0, lift, n + 1, z));
      auto r = H.classify(n + 1, Xp.multiply(n + 1, z, 0, lift));
      if (!l || !r) throw std::logic_error("postnikov_target: degree 0 does not preserve cycles");
      L.set_column(c, *l);
      R.set_column(c, *r);
    }
    T.module.left.push_back(L);
    T.module.right.push_back(R);
  }
  for (std::size_t c = 0; c < k; ++c) T.module.labels.push_back("[" + std::to_string(n + 1) + "," + std::to_string(c) + "]");
  if (g.is_field()) std::fill(T.module.orders.begin(), T.module.orders.end(), Integer(0));
  T.theta = Matrix::identity(k);
  return T;
}

KInvariantClass k_invariant(const TruncatedDga& X, const PostnikovTarget& T, int n, std::shared_ptr<const HoClassGroup> group) {
  const int m = n + 2;
  const Ground& g = X.ground();
  if (!group) {
    auto Q = std::make_shared<SemifreeDga>(semifree_replacement(T.base, m + 1));
    auto D = std::make_shared<SquareZeroDga>(square_zero_extension(T.base, T.module, m));
    group = std::make_shared<HoClassGroup>(homotopy_classes(Q, D));
  }
  const SemifreeDga& Q = *group->source;
  const auto& pres = Q.presentation;
  const TruncatedDga& C = *group->target->base;
  TruncatedDga Xp = brutal_truncation(X, n + 1);
  GradedGroup H(Xp.complex, n + 1, n + 1);
  if (T.theta.cols() != H.size(n + 1) || T.theta.rows() != group->target->module.size())
    throw std::invalid_argument("k_invariant: theta does not match H_{n+1} and the module");

  std::vector<Vector> lambda(pres.generators.size());
  std::map<std::size_t, Vector> mu;
  for (std::size_t v = 0; v < pres.generators.size(); ++v) {
    const int j = pres.generators[v].degree;
    if (j > m) continue;
    Vector t = j >= 1 ? map_polynomial(pres, Xp, lambda, j - 1, pres.differentials[v]) : Vector{};
    if (j == m) {
      auto c = H.classify(n + 1, t);
      if (!c) throw std::logic_error("k_invariant: obstruction is not a cycle");
      mu[v] = reduce_module(group->target->module, g, T.theta * *c);
      continue;
    }
    const std::size_t xd = Xp.dim(j), xr = Xp.dim(j - 1);
    const std::size_t cd = j <= n && C.complex.in_range(j) ? C.dim(j) : 0;
    Matrix Rc = cd ? torsion_block(C.complex.group(j).orders, g) : Matrix(0, 0);
    Matrix Rx = j >= 1 ? torsion_block(Xp.complex.group(j - 1).orders, g) : Matrix(0, 0);
    Matrix A(cd + xr, xd + Rc.cols() + Rx.cols());
    Matrix rho = cd ? T.to_base.at(static_cast<std::size_t>(j)) : Matrix(0, xd);
    Matrix dj = Xp.complex.d(j);
    for (std::size_t c = 0; c < xd; ++c) {
      for (std::size_t r = 0; r < cd; ++r) A(r, c) = rho(r, c);
      for (std::size_t r = 0; r < xr; ++r) A(cd + r, c) = dj(r, c);
    }
    for (std::size_t c = 0; c < Rc.cols(); ++c)
      for (std::size_t r = 0; r < cd; ++r) A(r, xd + c) = Rc(r, c);
    for (std::size_t c = 0; c < Rx.cols(); ++c)
      for (std::size_t r = 0; r < xr; ++r) A(cd + r, xd + Rc.cols() + c) = Rx(r, c);
    Vector b(cd + xr);
    if (cd) place(b, 0, pad(Q.images[v], cd));
    if (xr) place(b, cd, t);
    auto sol = solve(A, b, g);
    if (!sol) throw HypothesisError("k_invariant: the comparison to the base does not lift generator " + pres.generators[v].name);
    lambda[v] = Xp.complex.reduce(j, slice(*sol, 0, xd));
  }
  KInvariantClass K;
  K.n = n;
  for (std::size_t v : group->module_generators) {
    const Vector& part = mu.at(v);
    K.module_part.insert(K.module_part.end(), part.begin(), part.end());
  }
  auto c = group->class_of_module_part(K.module_part);
  if (!c) throw HypothesisError("k_invariant: the obstruction cocycle does not define a map");
  K.cls = *c;
  K.group = group;
  return K;
}

KInvariantClass k_invariant(const TruncatedDga& X, int n) { return k_invariant(X, postnikov_target(X, n), n); }

Extension extension_from_class(const HoClassGroup& G, std::size_t cls, int N) {
  const SquareZeroDga& D = *G.target;
  const int m = D.shift, n = m - 2;
  if (n < 0) throw std::invalid_argument("extension_from_class: the shift must be at least 2");
  if (N < m + 1) throw std::invalid_argument("extension_from_class: realize through at least degree " + std::to_string(m + 1));
  const Ground& g = D.dga.ground();
  const Bimodule& M = D.module;
  const std::size_t k = M.size();
  const SemifreeDga& Q = *G.source;
  auto Qr = std::make_shared<TruncatedDga>(Q.realize(N));
  Vector mu = G.module_part(G.maps.at(G.representative.at(cls)));
  std::map<int, Vector> per_gen;
  for (std::size_t b = 0; b < G.module_generators.size(); ++b)
    per_gen[static_cast<int>(G.module_generators[b])] = slice(mu, b * k, k);

  Bimodule Mq = scalar_bimodule(*Qr, M.orders);
  Mq.labels = M.labels;
  Blocks B{Qr, Mq, {n + 1}};
  auto extra = [&](int deg, Matrix& d) {
    if (deg != m) return;
    const std::size_t off = B.offset(m - 1, 0);
    for (std::size_t j = 0; j < Qr->dim(m); ++j) {
      Polynomial p = Qr->monomials->lift(m, unit_vector(Qr->dim(m), j));
      Vector val(k);
      for (const auto& [w, c] : p.terms())
        if (w.size() == 1 && per_gen.count(w[0])) val = add(val, scale(per_gen[w[0]], c));
      for (std::size_t i = 0; i < k; ++i) d(off + i, j) = -val[i];
    }
  };
  Extension E;
  E.dga = attach_blocks(B, {"M."}, N, false, extra);
  E.dga.name = "ext(" + D.dga.name + ")";
  if (!E.dga.complex.is_complex()) throw std::logic_error("extension_from_class: class representative is not a cocycle");

  PostnikovTarget& T = E.target;
  T.base = *D.base;
  T.module = M;
  for (int j = 0; j <= n; ++j) {
    Matrix phi = Q.comparison(*Qr, j);
    Matrix full(phi.rows(), E.dga.dim(j));
    for (std::size_t r = 0; r < phi.rows(); ++r)
      for (std::size_t c = 0; c < phi.cols(); ++c) full(r, c) = phi(r, c);
    T.to_base.push_back(full);
  }
  // theta inverts the map M -> H_{n+1}(E) sending m to the class of the cycle m
  TruncatedDga Ep = brutal_truncation(E.dga, n + 1);
  GradedGroup H(Ep.complex, n + 1, n + 1);
  const std::size_t off = B.offset(n + 1, 0);
  QuotientStructure qs = top_quotient(E.dga, n + 1);
  std::map<Vector, Vector> inverse;
  for (const auto& x : all_elements(M.orders, g, 1000000, "the module")) {
    Vector y(E.dga.dim(n + 1));
    place(y, off, x);
    auto c = H.classify(n + 1, qs.project(y));
    if (!c) throw std::logic_error("extension_from_class: module element is not a cycle");
    inverse[*c] = x;
  }
  T.theta = Matrix(k, H.size(n + 1));
  for (std::size_t c = 0; c < H.size(n + 1); ++c) {
    auto it = inverse.find(H.at(n + 1).structure().reduce(unit_vector(H.size(n + 1), c)));
    if (it == inverse.end()) throw std::logic_error("extension_from_class: H_{n+1} is not the module");
    T.theta.set_column(c, it->second);
  }
  return E;
}

// ---------------------------------------------------------------- orbits

std::vector<Matrix> bimodule_automorphisms(const Bimodule& M, const Ground& g, std::size_t cap) {
  const std::size_t k = M.size();
  auto elems = all_elements(M.orders, g, cap, "the module");
  std::vector<std::vector<Vector>> cand(k);
  for (std::size_t j = 0; j < k; ++j)
    for (const auto& x : elems)
      if (g.is_field() || M.orders[j].is_zero() || is_zero(reduce_module(M, g, scale(x, M.orders[j])))) cand[j].push_back(x);
  std::vector<Matrix> out;
  Matrix A(k, k);
  std::size_t visited = 0;
  std::function<void(std::size_t)> go = [&](std::size_t j) {
    if (++visited > cap) throw ResourceError("automorphism enumeration exceeds the cap of " + std::to_string(cap));
    if (j == k) {
      std::set<Vector> image;
      for (const auto& x : elems) image.insert(reduce_module(M, g, A * x));
      if (image.size() != elems.size()) return;
      for (std::size_t i = 0; i < M.left.size(); ++i)
        for (const Matrix* act : {&M.left[i], &M.right[i]})
          for (std::size_t c = 0; c < k; ++c) {
            Vector e = unit_vector(k, c);
            if (reduce_module(M, g, A * (*act * e)) != reduce_module(M, g, *act * (A * e))) return;
          }
      out.push_back(A);
      return;
    }
    for (const auto& x : cand[j]) {
      A.set_column(j, x);
      go(j + 1);
    }
  };
  go(0);
  return out;
}

OrbitReport classify_extensions(const HoClassGroup& G, const Ground& g) {
  OrbitReport R;
  R.group_order = G.order();
  R.group_factors = G.factors;
  const Bimodule& M = G.target->module;
  const std::size_t k = M.size();
  auto auts = bimodule_automorphisms(M, g);
  R.automorphisms = auts.size();
  std::vector<std::size_t> parent(G.order());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t c = 0; c < G.order(); ++c) {
    Vector mu = G.module_part(G.maps[G.representative[c]]);
    for (const auto& A : auts) {
      Vector moved;
      for (std::size_t b = 0; b < G.module_generators.size(); ++b) {
        Vector part = A * slice(mu, b * k, k);
        moved.insert(moved.end(), part.begin(), part.end());
      }
      auto d = G.class_of_module_part(moved);
      if (!d) throw std::logic_error("classify_extensions: automorphism does not act on maps");
      parent[find_root(parent, c)] = find_root(parent, *d);
    }
  }
  auto roots = union_find_roots(parent);
  std::map<std::size_t, std::size_t> which;
  for (std::size_t c = 0; c < G.order(); ++c) {
    auto it = which.find(roots[c]);
    if (it == which.end()) {
      it = which.emplace(roots[c], R.orbits.size()).first;
      R.orbits.emplace_back();
    }
    R.orbits[it->second].push_back(c);
  }
  return R;
}

// ---------------------------------------------------------------- sections

SemifreeDga postnikov_section(const SemifreeDga& Q, int n, int N, const RealizeOptions& opt) {
  if (N <= n + 1) throw std::invalid_argument("postnikov_section: N must exceed n+1");
  const TruncatedDga& A = *Q.target;
  SemifreeDga S;
  S.presentation = Q.presentation;
  S.presentation.name = "P_" + std::to_string(n) + "(" + Q.presentation.name + ")";
  S.target = std::make_shared<TruncatedDga>(brutal_truncation(A, n));
  S.validity = std::min(Q.validity, N - 1);
  S.notes = Q.notes;
  S.notes.push_back("cells attached to kill homology above degree " + std::to_string(n));
  QuotientStructure qs = top_quotient(A, n);
  for (std::size_t v = 0; v < Q.images.size(); ++v) {
    const int j = Q.presentation.generators[v].degree;
    if (j < n)
      S.images.push_back(Q.images[v]);
    else if (j == n)
      S.images.push_back(qs.project(Q.images[v]));
    else
      S.images.push_back(Vector{});
  }
  RealizeOptions quiet = opt;
  quiet.verify = false;
  const Ground& g = A.ground();
  int stage = S.stage_count();
  std::size_t count = 0;
  for (int d = n + 1; d <= N - 1; ++d) {
    TruncatedDga R = S.realize(d + 1, quiet);
    GradedGroup H(R.complex, d, d);
    if (H.size(d) == 0) continue;
    ++stage;
    for (std::size_t i = 0; i < H.size(d); ++i) {
      Vector z = H.representative(d, i);
      Polynomial dv = R.monomials->lift(d, z).normalized(g);
      S.presentation.add_generator("a" + std::to_string(++count), d + 1, dv, stage);
      S.images.push_back(Vector{});
    }
  }
  return S;
}

}  // namespace dgatk
