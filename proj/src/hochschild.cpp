#include "dgatk/hochschild.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

namespace {

int sign_of(long e) { return (e % 2 == 0) ? 1 : -1; }

long mod(long a, long p) { return ((a % p) + p) % p; }

long binomial_mod(long n, long k, long p) {
  // Lucas
  long r = 1;
  while (n > 0 || k > 0) {
    long a = n % p, b = k % p;
    if (b > a) return 0;
    long c = 1;
    for (long i = 0; i < b; ++i) c = c * (a - i) / (i + 1);
    r = r * (c % p) % p;
    n /= p;
    k /= p;
  }
  return r;
}

long factorial_mod(long k, long p) {
  long r = 1;
  for (long i = 2; i <= k && r != 0; ++i) r = r * (i % p) % p;
  return r;
}

// degrees -hi-1..-lo+1 of Hom, read back as cohomological degrees lo..hi
std::map<int, std::vector<Integer>> cohomology_of(const HomComplex& H, int lo, int hi) {
  std::map<int, std::vector<Integer>> out;
  GradedGroup G(H.complex, -hi, -lo);
  for (int n = lo; n <= hi; ++n) out[n] = G.factors(-n);
  return out;
}

std::shared_ptr<const DgModule> coefficients(const Enveloping& E, const Bimodule& M, int r) {
  return std::make_shared<DgModule>(trivial_module(*E.env, M.orders, r, "M"));
}

std::string range_note(int lo, int hi, int N) {
  return "degrees " + std::to_string(lo) + ".." + std::to_string(hi) + " certified with the model and E through degree " +
         std::to_string(N);
}

void require_validity(const SemifreeDga& Q, int N) {
  if (Q.validity < N)
    throw HypothesisError("model valid through degree " + std::to_string(Q.validity) + ", needed through " + std::to_string(N));
}

}  // namespace

// ---------------------------------------------------------------- E = Q ⊗ Q^op

std::optional<std::size_t> Enveloping::index(int a, std::size_t i, int b, std::size_t j) const {
  const int n = a + b;
  if (n < 0 || n >= static_cast<int>(positions.size())) return std::nullopt;
  auto it = positions[static_cast<std::size_t>(n)].find({static_cast<std::size_t>(a), i, static_cast<std::size_t>(b), j});
  if (it == positions[static_cast<std::size_t>(n)].end()) return std::nullopt;
  return it->second;
}

Vector Enveloping::word(const Word& w) const {
  const int n = model->presentation.word_degree(w);
  return algebra->monomials->project(n, Polynomial::word(w));
}

Vector Enveloping::left(int a, const Vector& x) const {
  Vector out(env->dim(a));
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero())
      if (auto k = index(a, i, 0, 0)) out[*k] += x[i];
  return env->complex.reduce(a, std::move(out));
}

Vector Enveloping::right(int b, const Vector& y) const {
  Vector out(env->dim(b));
  for (std::size_t j = 0; j < y.size(); ++j)
    if (!y[j].is_zero())
      if (auto k = index(0, 0, b, j)) out[*k] += y[j];
  return env->complex.reduce(b, std::move(out));
}

Enveloping enveloping(const SemifreeDga& Q, int N, const RealizeOptions& opt) {
  for (const auto& g : Q.presentation.generators)
    if (g.degree <= 0) throw HypothesisError("enveloping: the model has a generator in degree " + std::to_string(g.degree));
  Enveloping E;
  E.model = std::make_shared<SemifreeDga>(Q);
  auto A = std::make_shared<TruncatedDga>(Q.realize(N, opt));
  E.algebra = A;
  E.validity = N;
  auto env = std::make_shared<TruncatedDga>(tensor_dga(*A, opposite(*A), N));
  env->name = "E";
  E.env = env;
  // same basis order as tensor_dga
  const Ground& g = A->ground();
  E.keys.resize(static_cast<std::size_t>(N + 1));
  E.positions.resize(static_cast<std::size_t>(N + 1));
  for (int n = 0; n <= N; ++n)
    for (int a = 0; a <= n; ++a)
      for (std::size_t i = 0; i < A->dim(a); ++i)
        for (std::size_t j = 0; j < A->dim(n - a); ++j) {
          Integer o = g.is_field() ? Integer(0) : gcd(A->complex.group(a).orders[i], A->complex.group(n - a).orders[j]);
          if (o.is_one()) continue;
          std::array<std::size_t, 4> key{static_cast<std::size_t>(a), i, static_cast<std::size_t>(n - a), j};
          E.positions[static_cast<std::size_t>(n)].emplace(key, E.keys[static_cast<std::size_t>(n)].size());
          E.keys[static_cast<std::size_t>(n)].push_back(key);
        }
  for (int n = 0; n <= N; ++n)
    if (E.keys[static_cast<std::size_t>(n)].size() != env->dim(n)) throw std::logic_error("enveloping: basis mismatch in degree " + std::to_string(n));

  E.order.resize(Q.presentation.generators.size());
  std::iota(E.order.begin(), E.order.end(), 0);
  std::stable_sort(E.order.begin(), E.order.end(), [&](std::size_t x, std::size_t y) {
    return Q.presentation.generators[x].degree < Q.presentation.generators[y].degree;
  });

  auto D = std::make_shared<DgModule>();
  D->base = env;
  D->complex = A->complex;
  D->name = "Q";
  auto keys = std::make_shared<std::vector<std::vector<std::array<std::size_t, 4>>>>(E.keys);
  D->action = [A, keys](int ne, std::size_t u, int m, std::size_t j) -> Vector {
    auto [a, i, b, jj] = (*keys)[static_cast<std::size_t>(ne)][u];
    const int ia = static_cast<int>(a), ib = static_cast<int>(b);
    Vector x = A->multiply(ia, unit_vector(A->dim(ia), i), m, unit_vector(A->dim(m), j));
    Vector y = A->multiply(ia + m, x, ib, unit_vector(A->dim(ib), jj));
    return scale(y, sign_of(static_cast<long>(ib) * m));
  };
  E.diagonal = D;
  return E;
}

std::vector<Vector> universal_derivation(const Enveloping& E, const Polynomial& p, int n) {
  const auto& P = E.model->presentation;
  const TruncatedDga& env = *E.env;
  auto block = [&](std::size_t g, int deg) {
    const int k = deg - P.generators[g].degree;
    return Vector(k >= 0 ? env.dim(k) : 0);
  };
  std::vector<Vector> out(P.generators.size());
  for (std::size_t g = 0; g < out.size(); ++g) out[g] = block(g, n);
  for (const auto& [w, c] : p.terms()) {
    if (w.empty()) continue;
    std::vector<Vector> cur(P.generators.size());
    int deg = P.generators[static_cast<std::size_t>(w.back())].degree;
    for (std::size_t g = 0; g < cur.size(); ++g) cur[g] = block(g, deg);
    cur[static_cast<std::size_t>(w.back())] = env.unit;
    for (std::size_t t = w.size() - 1; t-- > 0;) {
      const auto x = static_cast<std::size_t>(w[t]);
      const int dx = P.generators[x].degree;
      Word tail(w.begin() + static_cast<std::ptrdiff_t>(t + 1), w.end());
      Vector lx = E.left(dx, E.word({w[t]}));
      std::vector<Vector> next(cur.size());
      for (std::size_t g = 0; g < cur.size(); ++g) {
        next[g] = block(g, dx + deg);
        if (cur[g].empty() || is_zero(cur[g])) continue;
        next[g] = env.multiply(dx, lx, deg - P.generators[g].degree, cur[g]);
      }
      Vector rt = scale(E.right(deg, E.word(tail)), sign_of(static_cast<long>(dx) * deg));
      next[x] = env.complex.reduce(deg, add(next[x], rt));
      cur = std::move(next);
      deg += dx;
    }
    for (std::size_t g = 0; g < out.size(); ++g)
      if (!cur[g].empty()) out[g] = add(out[g], scale(cur[g], c));
  }
  for (std::size_t g = 0; g < out.size(); ++g) {
    const int k = n - P.generators[g].degree;
    if (k >= 0 && !out[g].empty()) out[g] = env.complex.reduce(k, out[g]);
  }
  return out;
}

namespace {

AugmentationKernel kernel_of(const Enveloping& E, int top) {
  AugmentationKernel K;
  const auto& P = E.model->presentation;
  for (std::size_t v : E.order) {
    if (P.generators[v].degree > top) break;
    K.generators.push_back(v);
    const int dv = P.generators[v].degree - 1;
    auto D = universal_derivation(E, P.differentials[v], dv);
    std::vector<Vector> row;
    for (std::size_t w : K.generators) row.push_back(D[w]);
    for (std::size_t g = 0; g < D.size(); ++g)
      if (std::find(K.generators.begin(), K.generators.end(), g) == K.generators.end() && !D[g].empty() && !is_zero(D[g]))
        throw std::logic_error("universal derivation involves a later generator");
    K.differential.push_back(std::move(row));
  }
  return K;
}

SemifreeModule kernel_module(const Enveloping& E, const AugmentationKernel& K) {
  SemifreeModule O(E.env, nullptr);
  const auto& P = E.model->presentation;
  for (std::size_t s = 0; s < K.generators.size(); ++s) {
    const int deg = P.generators[K.generators[s]].degree;
    Vector d(O.dim(deg - 1));
    for (std::size_t t = 0; t < s; ++t)
      if (!K.differential[s][t].empty() && !is_zero(K.differential[s][t])) d = add(d, O.element(t, deg - 1, K.differential[s][t]));
    O.add_basis("D" + P.generators[K.generators[s]].name, deg, O.reduce(deg - 1, d));
  }
  O.validity = E.validity;
  return O;
}

}  // namespace

HochschildResolution small_resolution(const SemifreeDga& Q, int N, const RealizeOptions& opt) {
  HochschildResolution R;
  R.env = enveloping(Q, N, opt);
  R.route = "small";
  const Enveloping& E = R.env;
  const auto& P = Q.presentation;
  AugmentationKernel K = kernel_of(E, N);
  auto M = std::make_shared<SemifreeModule>(E.env, E.diagonal);
  M->add_basis("1", 0, Vector{}, E.algebra->unit);
  for (std::size_t s = 0; s < K.generators.size(); ++s) {
    const std::size_t v = K.generators[s];
    const int deg = P.generators[v].degree;
    Vector x = E.word({static_cast<int>(v)});
    Vector omega = add(E.left(deg, x), scale(E.right(deg, x), Integer(-1)));
    Vector d = M->element(0, deg, omega);
    for (std::size_t t = 0; t < s; ++t) {
      const Vector& c = K.differential[s][t];
      if (c.empty() || is_zero(c)) continue;
      const int cd = deg - 1 - P.generators[K.generators[t]].degree;
      d = add(d, M->element(t + 1, deg, scale(c, -sign_of(cd))));
    }
    M->add_basis("s" + P.generators[v].name, deg + 1, M->reduce(deg, d));
  }
  M->validity = N;
  R.resolution = M;
  R.kernel = std::move(K);
  return R;
}

HochschildResolution kill_cycles_resolution(const SemifreeDga& Q, int N, const RealizeOptions& opt) {
  HochschildResolution R;
  R.env = enveloping(Q, N + 1, opt);
  R.route = "kill-cycles";
  R.resolution = std::make_shared<SemifreeModule>(semifree_module_resolution(R.env.diagonal, N));
  return R;
}

// ---------------------------------------------------------------- cohomology

std::vector<Integer> CohomologyTable::at(int n) const {
  auto it = factors.find(n);
  if (it == factors.end()) throw std::out_of_range("degree " + std::to_string(n) + " is outside the certified range");
  return it->second;
}

namespace {

HochschildResolution resolve(const SemifreeDga& Q, int N, const HochschildOptions& opt) {
  if (opt.route == "small") return small_resolution(Q, N, opt.realize);
  if (opt.route == "kill-cycles") return kill_cycles_resolution(Q, N, opt.realize);
  throw std::invalid_argument("unknown resolution route: " + opt.route);
}

bool homology_is_module(const SemifreeDga& Q, const Bimodule& M, int r, int N) {
  if (r != 0) return false;
  const TruncatedDga& C = *Q.target;
  GradedGroup H = homology(C, std::min(N, C.complex.zero_above ? C.top() + 1 : C.top()));
  const Ground& g = C.ground();
  for (int n = H.lo(); n <= H.hi(); ++n) {
    auto f = H.factors(n);
    if (n == 0) {
      auto m = M.orders;
      if (g.is_field()) std::fill(m.begin(), m.end(), Integer(0));
      std::sort(m.begin(), m.end());
      std::sort(f.begin(), f.end());
      if (f != m) return false;
    } else if (!f.empty()) {
      return false;
    }
  }
  return true;
}

}  // namespace

CohomologyTable hochschild_cohomology(const SemifreeDga& Q, const Bimodule& M, int r, int lo, int hi,
                                      const HochschildOptions& opt) {
  if (lo > hi) throw std::invalid_argument("empty degree range");
  const int N = std::max(r + hi + 2, 1);
  require_validity(Q, N);
  CohomologyTable T;
  T.ground = Q.presentation.ground;
  T.lo = lo;
  T.hi = hi;
  HochschildResolution R = resolve(Q, N, opt);
  if (std::string w = R.resolution->check(N); !w.empty()) throw std::logic_error("resolution: " + w);
  auto Mm = coefficients(R.env, M, r);
  HomComplex H = hom_complex(*R.resolution, *Mm, -hi - 1, -lo + 1);
  T.factors = cohomology_of(H, lo, hi);
  T.provenance.push_back("resolution: " + R.route + " (" + std::to_string(R.resolution->basis.size()) + " basis elements)");
  T.provenance.push_back(range_note(lo, hi, N));
  if (opt.ring) {
    if (!homology_is_module(Q, M, r, N))
      throw HypothesisError("ring structure needs M = H_0(C) in degree 0 with C having no higher homology");
    if (lo < 0) throw std::invalid_argument("ring structure needs nonnegative degrees");
    const int K = hi;
    auto P = R.resolution;
    EndomorphismDga End = endomorphism_dga(P, K, 1, N);
    T.ring = HomologyRing(End.dga, -hi, -lo);
    for (int n = lo; n <= hi; ++n) {
      auto a = T.ring->factors(-n), b = T.factors[n];
      if (T.ground.is_field()) {
        if (a.size() != b.size()) throw std::logic_error("End and Hom(P, M) disagree in degree " + std::to_string(n));
      } else if (a != b) {
        throw std::logic_error("End and Hom(P, M) disagree in degree " + std::to_string(n));
      }
    }
    T.provenance.push_back("products: composition in Hom(P_{<=" + std::to_string(K) + "}, P)");
  }
  return T;
}

CohomologyTable hochschild_cohomology(const TruncatedDga& C, const Bimodule& M, int r, int lo, int hi,
                                      const HochschildOptions& opt) {
  const int N = std::max(r + hi + 2, 1);
  SemifreeDga Q = semifree_replacement(C, N, opt.realize);
  return hochschild_cohomology(Q, M, r, lo, hi, opt);
}

CohomologyTable derivation_groups(const SemifreeDga& Q, const Bimodule& M, int r, int lo, int hi,
                                  const HochschildOptions& opt) {
  if (lo > hi) throw std::invalid_argument("empty degree range");
  const int N = std::max(r + hi + 3, 1);
  require_validity(Q, N);
  Enveloping E = enveloping(Q, N, opt.realize);
  AugmentationKernel K = kernel_of(E, N);
  SemifreeModule O = kernel_module(E, K);
  auto Mm = coefficients(E, M, r);
  HomComplex H = hom_complex(O, *Mm, -hi - 1, -lo + 1);
  CohomologyTable T;
  T.ground = Q.presentation.ground;
  T.lo = lo;
  T.hi = hi;
  T.factors = cohomology_of(H, lo, hi);
  T.provenance.push_back("Hom over E from the kernel of E -> Q");
  T.provenance.push_back(range_note(lo, hi, N));

  HochschildOptions o = opt;
  o.ring = false;
  CohomologyTable HH = hochschild_cohomology(Q, M, r, lo + 1, hi + 1, o);
  for (int n = lo; n <= hi; ++n) {
    if (n == -r || n == -r - 1) continue;
    auto a = T.factors[n], b = HH.at(n + 1);
    if (a != b)
      throw std::logic_error("Der^" + std::to_string(n) + " = " + group_name(a, T.ground) + " but HH^" + std::to_string(n + 1) +
                             " = " + group_name(b, T.ground));
  }
  T.provenance.push_back("checked against HH^{n+1} away from degrees " + std::to_string(-r - 1) + ", " + std::to_string(-r));
  return T;
}

CohomologyTable derivation_groups(const TruncatedDga& C, const Bimodule& M, int r, int lo, int hi,
                                  const HochschildOptions& opt) {
  const int N = std::max(r + hi + 3, 1);
  SemifreeDga Q = semifree_replacement(C, N, opt.realize);
  return derivation_groups(Q, M, r, lo, hi, opt);
}

// ---------------------------------------------------------------- divided powers

DividedPowerElement DividedPowerElement::gamma(int k, long p, long c) {
  DividedPowerElement e;
  e.p = p;
  if (k < 0) throw std::invalid_argument("negative divided power");
  if (mod(c, p)) e.coefficients[k] = mod(c, p);
  return e;
}

std::string DividedPowerElement::str() const {
  if (coefficients.empty()) return "0";
  std::ostringstream s;
  bool first = true;
  for (const auto& [k, c] : coefficients) {
    if (!first) s << " + ";
    first = false;
    if (c != 1) s << c << "*";
    s << "g" << k;
  }
  return s.str();
}

DividedPowerElement divided_power_add(const DividedPowerElement& a, const DividedPowerElement& b) {
  if (a.p != b.p) throw std::invalid_argument("divided powers over different primes");
  DividedPowerElement r = a;
  for (const auto& [k, c] : b.coefficients) {
    long v = mod(r.coefficients[k] + c, a.p);
    if (v) r.coefficients[k] = v;
    else r.coefficients.erase(k);
  }
  return r;
}

DividedPowerElement divided_power_multiply(const DividedPowerElement& a, const DividedPowerElement& b) {
  if (a.p != b.p) throw std::invalid_argument("divided powers over different primes");
  const long p = a.p;
  DividedPowerElement r;
  r.p = p;
  for (const auto& [i, x] : a.coefficients)
    for (const auto& [j, y] : b.coefficients)
      r = divided_power_add(r, DividedPowerElement::gamma(i + j, p, binomial_mod(i + j, i, p) * x % p * y % p));
  return r;
}

SigmaPolynomial SigmaPolynomial::power(int k, long p, long c) {
  SigmaPolynomial s;
  s.p = p;
  if (k < 0) throw std::invalid_argument("negative power");
  if (mod(c, p)) s.coefficients[k] = mod(c, p);
  return s;
}

std::string SigmaPolynomial::str() const {
  if (coefficients.empty()) return "0";
  std::ostringstream s;
  bool first = true;
  for (const auto& [k, c] : coefficients) {
    if (!first) s << " + ";
    first = false;
    if (c != 1 || k == 0) s << c;
    if (c != 1 && k > 0) s << "*";
    if (k == 1) s << "s";
    else if (k > 1) s << "s^" << k;
  }
  return s.str();
}

SigmaPolynomial sigma_add(const SigmaPolynomial& a, const SigmaPolynomial& b) {
  if (a.p != b.p) throw std::invalid_argument("polynomials over different primes");
  SigmaPolynomial r = a;
  for (const auto& [k, c] : b.coefficients) {
    long v = mod(r.coefficients[k] + c, a.p);
    if (v) r.coefficients[k] = v;
    else r.coefficients.erase(k);
  }
  return r;
}

SigmaPolynomial sigma_multiply(const SigmaPolynomial& a, const SigmaPolynomial& b) {
  if (a.p != b.p) throw std::invalid_argument("polynomials over different primes");
  SigmaPolynomial r;
  r.p = a.p;
  for (const auto& [i, x] : a.coefficients)
    for (const auto& [j, y] : b.coefficients) {
      long v = mod(r.coefficients[i + j] + x * y, a.p);
      if (v) r.coefficients[i + j] = v;
      else r.coefficients.erase(i + j);
    }
  return r;
}

DividedPowerElement hh_to_thh(const SigmaPolynomial& c) {
  DividedPowerElement r;
  r.p = c.p;
  for (const auto& [k, x] : c.coefficients) r = divided_power_add(r, DividedPowerElement::gamma(k, c.p, factorial_mod(k, c.p) * x));
  return r;
}

Bimodule augmentation_bimodule(const TruncatedDga& C) {
  GradedGroup H(C.complex, 0, 0);
  auto f = H.factors(0);
  if (f.size() != 1) throw HypothesisError("H_0 is not cyclic");
  return scalar_bimodule(C, f);
}

SigmaPolynomial sigma_coordinates(const KInvariantClass& K) {
  const HoClassGroup& G = *K.group;
  const long p = static_cast<long>(G.order());
  bool prime = p >= 2;
  for (long q = 2; q * q <= p; ++q) prime = prime && p % q != 0;
  if (!prime) throw HypothesisError("incomparable coordinates: the class group has order " + std::to_string(p) + ", not a prime");
  std::optional<std::size_t> gen;
  Vector best;
  for (std::size_t c = 0; c < G.order(); ++c) {
    if (c == G.zero) continue;
    Vector mu = G.module_part(G.maps[G.representative[c]]);
    if (!gen || mu < best) {
      gen = c;
      best = mu;
    }
  }
  long k = 0;
  for (std::size_t acc = G.zero; acc != K.cls; acc = G.sum[acc][*gen])
    if (++k > p) throw std::logic_error("class is not a multiple of the generator");
  if (k == 0) return SigmaPolynomial{p, {}};
  if ((K.n + 3) % 2 != 0) throw HypothesisError("nonzero class in an odd Hochschild degree");
  return SigmaPolynomial::power((K.n + 3) / 2, p, k);
}

TopologicalVerdict topological_equivalence_verdict(const SigmaPolynomial& k1, const SigmaPolynomial& k2) {
  if (k1.p != k2.p) throw std::invalid_argument("incomparable coordinates: different primes");
  std::optional<int> deg;
  for (const auto* k : {&k1, &k2})
    for (const auto& [e, c] : k->coefficients) {
      (void)c;
      if (deg && *deg != e) throw std::invalid_argument("incomparable coordinates: classes in different degrees");
      deg = e;
    }
  TopologicalVerdict v;
  v.image1 = hh_to_thh(k1);
  v.image2 = hh_to_thh(k2);
  v.equivalent = v.image1 == v.image2;
  v.verdict = v.equivalent ? "topologically equivalent (matching THH k-invariant images)" : "inequivalent (THH images differ)";
  v.criterion =
      "valid for dgas that are single square-zero extensions of F_" + std::to_string(k1.p) +
      " (two nonzero homology groups), where the k-invariant determines the dga and its image determines the ring spectrum";
  v.reference = "THH(F_" + std::to_string(k1.p) + ") = Gamma[a2], the divided power algebra on a degree 2 class, as calculated by Bokstedt (reference value, not computed)";
  return v;
}

}  // namespace dgatk
