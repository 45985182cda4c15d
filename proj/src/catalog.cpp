#include "dgatk/catalog.hpp"

#include <sstream>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

namespace {

CatalogCheck chk(std::string kind, std::vector<std::string> args, std::string expected, std::string source) {
  return {std::move(kind), std::move(args), std::move(expected), std::move(source)};
}

std::vector<CatalogEntry> build() {
  std::vector<CatalogEntry> c;
  const std::string zero6 = " 1:0 2:0 3:0 4:0 5:0 6:0";

  c.push_back({"F2", R"(dga "F2" over Z { rel 2; })", "F_2 as a dga over the integers", "",
               {chk("homology", {"6"}, "0:Z/2" + zero6, "trivial"),
                chk("replacement", {"5", "4"}, "e:1 d=2; f:3 d=e^2; g:5 d=e*f + f*e", "published"),
                chk("stage-homology", {"3", "4"}, "Z/2 by e*f + f*e", "published"),
                chk("derived-dims", {"2", "6"}, "1,1,0,0,0,0,0", "published"),
                chk("derived-squares", {"2", "6"}, "zero", "published"),
                chk("hh", {"0", "6"}, "0:Z/2 1:0 2:Z/2 3:0 4:Z/2 5:0 6:Z/2", "published"),
                chk("hh-powers", {"3"}, "s:nonzero s^2:nonzero s^3:nonzero", "published"),
                chk("der", {"2"}, "0", "derived"),
                chk("der", {"3"}, "Z/2", "derived"),
                chk("ho", {"2"}, "1", "published"),
                chk("ho", {"3"}, "2", "published"),
                chk("orbits", {"3"}, "2", "published")}});
  c.push_back({"F3", R"(dga "F3" over Z { rel 3; })", "F_3 as a dga over the integers", "",
               {chk("homology", {"4"}, "0:Z/3 1:0 2:0 3:0 4:0", "trivial"),
                chk("hh", {"0", "4"}, "0:Z/3 1:0 2:Z/3 3:0 4:Z/3", "published"),
                chk("der", {"3"}, "Z/3", "derived"),
                chk("ho", {"3"}, "3", "published"),
                chk("orbits", {"3"}, "2", "published")}});
  c.push_back({"F5", R"(dga "F5" over Z { rel 5; })", "F_5 as a dga over the integers", "",
               {chk("homology", {"4"}, "0:Z/5 1:0 2:0 3:0 4:0", "trivial"),
                chk("hh", {"0", "4"}, "0:Z/5 1:0 2:Z/5 3:0 4:Z/5", "published"),
                chk("ho", {"3"}, "5", "published"),
                chk("orbits", {"3"}, "2", "published")}});
  c.push_back({"F2-field", R"(dga "F2" over F2 { })", "F_2 over itself", "",
               {chk("hh", {"0", "6"}, "0:F2 1:0 2:0 3:0 4:0 5:0 6:0", "published")}});
  c.push_back({"F3-field", R"(dga "F3" over F3 { })", "F_3 over itself", "",
               {chk("hh", {"0", "6"}, "0:F3 1:0 2:0 3:0 4:0 5:0 6:0", "published")}});

  c.push_back({"C-p2", R"(dga "C-p2" over Z { gen e:1; diff e = 2; rel e^4; })",
               "Z[e; de=2]/(e^4), |e| = 1: exotic dga with homology an exterior algebra on a degree 2 class", "",
               {chk("homology", {"6"}, "0:Z/2 1:0 2:Z/2 3:0 4:0 5:0 6:0", "published"),
                chk("product", {"2", "2", "6"}, "0", "published"),
                chk("kinv", {"1"}, "nonzero in Z/2", "derived"),
                chk("derived-squares", {"2", "6"}, "nonzero", "derived"),
                chk("distinguish", {"D-p2", "6"}, "not quasi-isomorphic (derived mod 2 ring)", "published"),
                chk("thh", {"D-p2", "1"}, "topologically equivalent (matching THH k-invariant images)", "published")}});
  c.push_back({"D-p2", R"(dga "D-p2" over Z { gen g:2; rel 2; rel g^2; })", "exterior algebra on a degree 2 class over F_2", "",
               {chk("homology", {"6"}, "0:Z/2 1:0 2:Z/2 3:0 4:0 5:0 6:0", "published"),
                chk("product", {"2", "2", "6"}, "0", "trivial"),
                chk("kinv", {"1"}, "zero in Z/2", "trivial"),
                chk("derived-squares", {"2", "6"}, "zero", "derived")}});
  c.push_back({"C3-p2", R"(dga "C3-p2" over Z { gen e:1; diff e = 2; rel e^3; rel 2*e^2; })",
               "Z[e; de=2]/(e^3, 2e^2): the exotic degree 2 extension at p = 2", "",
               {chk("homology", {"6"}, "0:Z/2 1:0 2:Z/2 3:0 4:0 5:0 6:0", "published"),
                chk("product", {"2", "2", "6"}, "0", "published"),
                chk("kinv", {"1"}, "nonzero in Z/2", "published"),
                chk("distinguish", {"C-p2", "6"}, "no obstruction found through degree 6", "derived"),
                chk("thh", {"D-p2", "1"}, "topologically equivalent (matching THH k-invariant images)", "derived")}});
  c.push_back({"C3-p3", R"(dga "C3-p3" over Z { gen e:1; diff e = 3; rel e^3; rel 3*e^2; })",
               "Z[e; de=3]/(e^3, 3e^2): the exotic degree 2 extension at p = 3", "",
               {chk("homology", {"6"}, "0:Z/3 1:0 2:Z/3 3:0 4:0 5:0 6:0", "published"),
                chk("kinv", {"1"}, "nonzero in Z/3", "published"),
                chk("thh", {"D-p3", "1"}, "inequivalent (THH images differ)", "derived")}});
  c.push_back({"D-p3", R"(dga "D-p3" over Z { gen g:2; rel 3; rel g^2; })", "exterior algebra on a degree 2 class over F_3", "",
               {chk("homology", {"4"}, "0:Z/3 1:0 2:Z/3 3:0 4:0", "published"),
                chk("kinv", {"1"}, "zero in Z/3", "trivial")}});
  const std::string n4 = "gen e:1; gen f:3; diff f = e^2; rel e^4; rel e^2*f; rel e*f*e; rel f*e^2; rel f*e*f; rel f^2; ";
  const std::string n4note =
      "the published relation list has a doubled comma between fe^2 and fef; the empty entry is dropped";
  c.push_back({"C4-p2", "dga \"C4-p2\" over Z { " + n4 + "diff e = 2; rel 2*e*f + 2*f*e; }",
               "exotic dga with homology an exterior algebra on a degree 4 class, p = 2", n4note,
               {chk("homology", {"6"}, "0:Z/2 1:0 2:0 3:0 4:Z/2 5:0 6:0", "published"),
                chk("kinv", {"3"}, "nonzero in Z/2", "derived")}});
  c.push_back({"C4-p3", "dga \"C4-p3\" over Z { " + n4 + "diff e = 3; rel 3*e*f + 3*f*e; }",
               "exotic dga with homology an exterior algebra on a degree 4 class, p = 3", n4note,
               {chk("homology", {"6"}, "0:Z/3 1:0 2:0 3:0 4:Z/3 5:0 6:0", "published"),
                chk("kinv", {"3"}, "nonzero in Z/3", "derived"),
                chk("thh", {"D4-p3", "3"}, "topologically equivalent (matching THH k-invariant images)", "published")}});
  c.push_back({"D4-p3", R"(dga "D4-p3" over Z { gen g:4; rel 3; rel g^2; })", "exterior algebra on a degree 4 class over F_3", "",
               {chk("homology", {"6"}, "0:Z/3 1:0 2:0 3:0 4:Z/3 5:0 6:0", "published"),
                chk("kinv", {"3"}, "zero in Z/3", "trivial")}});
  const std::string note54 =
      "printed degrees |x| = 1, |y| = 2 for the derived mod 2 ring contradict the stated homology; the values here "
      "correspond to |y| = 3";
  c.push_back({"C-eh", R"(dga "C-eh" over Z { gen e:1; gen h:3; diff e = 2; diff h = 0; rel e^4; rel h^2; rel e*h + h*e; })",
               "Z<e, h; de=2, dh=0>/(e^4, h^2, eh+he), |e| = 1, |h| = 3", note54,
               {chk("homology", {"6"}, "0:Z/2 1:0 2:Z/2 3:Z/2 4:0 5:Z/2 6:0", "published"),
                chk("product", {"2", "3", "6"}, "Z/2", "published"),
                chk("derived-dims", {"2", "6"}, "1,1,1,2,1,1,1", "derived"),
                chk("derived-squares", {"2", "6"}, "nonzero", "published"),
                chk("distinguish", {"D-gh", "6"}, "not quasi-isomorphic (derived mod 2 ring)", "published")}});
  c.push_back({"D-gh", R"(dga "D-gh" over Z { gen g:2; gen h:3; rel 2; rel g^2; rel h^2; rel g*h - h*g; })",
               "exterior algebra on classes of degrees 2 and 3 over F_2", "",
               {chk("homology", {"6"}, "0:Z/2 1:0 2:Z/2 3:Z/2 4:0 5:Z/2 6:0", "published"),
                chk("product", {"2", "3", "6"}, "Z/2", "trivial"),
                chk("derived-squares", {"2", "6"}, "zero", "published")}});
  return c;
}

int arg(const CatalogCheck& c, std::size_t i) {
  if (i >= c.args.size()) throw std::invalid_argument("check " + c.kind + " needs " + std::to_string(i + 1) + " arguments");
  return std::stoi(c.args[i]);
}

TruncatedDga realized(const CatalogEntry& e, int N, const RealizeOptions& opt) { return realize(e.presentation(), N, opt); }

const CatalogEntry& other(const CatalogCheck& c) {
  const CatalogEntry* o = c.args.empty() ? nullptr : find_entry(c.args[0]);
  if (!o) throw std::invalid_argument("check " + c.kind + " refers to an unknown entry");
  return *o;
}

std::string zero_name(bool zero) { return zero ? "zero" : "nonzero"; }

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = build();
  return entries;
}

const CatalogEntry* find_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return &e;
  return nullptr;
}

std::string group_table(const std::map<int, std::vector<Integer>>& factors, const Ground& g) {
  std::string s;
  for (const auto& [n, f] : factors) s += (s.empty() ? "" : " ") + std::to_string(n) + ":" + group_name(f, g);
  return s;
}

std::string evaluate_check(const CatalogEntry& e, const CatalogCheck& c, const RealizeOptions& opt) {
  const std::string& k = c.kind;
  if (k == "homology") {
    const int N = arg(c, 0);
    auto A = realized(e, N + 1, opt);
    GradedGroup H = homology(A, N + 1);
    std::map<int, std::vector<Integer>> f;
    for (int n = 0; n <= N; ++n) f[n] = H.factors(n);
    return group_table(f, A.ground());
  }
  if (k == "product") {
    const int a = arg(c, 0), b = arg(c, 1), N = arg(c, 2);
    auto A = realized(e, N + 1, opt);
    HomologyRing R = homology_ring(A, N + 1);
    std::vector<Vector> cols;
    for (std::size_t i = 0; i < R.size(a); ++i)
      for (std::size_t j = 0; j < R.size(b); ++j) cols.push_back(R.basis_product(a, i, b, j));
    return group_name(subgroup_factors(R, a + b, cols), A.ground());
  }
  if (k == "derived-dims" || k == "derived-squares") {
    const int p = arg(c, 0), N = arg(c, 1);
    auto A = realized(e, N + 2, opt);
    DerivedTensor T = derived_tensor(A, koszul_model(p, N + 2), N, opt);
    if (k == "derived-squares") {
      auto s = ring_fingerprint(T.ring).degree1_squares_zero;
      return s ? zero_name(*s) : "undetermined";
    }
    std::string s;
    for (int n = 0; n <= N; ++n) s += (n ? "," : "") + std::to_string(T.ring.size(n));
    return s;
  }
  if (k == "replacement") {
    const int N = arg(c, 0), stage = arg(c, 1);
    SemifreeDga S = semifree_replacement(realized(e, N + 1, opt), N, opt);
    const auto& P = S.presentation;
    std::string s;
    for (std::size_t i = 0; i < P.generators.size(); ++i) {
      if (P.generators[i].stage > stage) continue;
      if (!s.empty()) s += "; ";
      s += P.generators[i].name + ":" + std::to_string(P.generators[i].degree) + " d=" +
           (P.differentials[i].is_zero() ? "0" : P.format(P.differentials[i]));
    }
    return s;
  }
  if (k == "stage-homology") {
    const int stage = arg(c, 0), n = arg(c, 1);
    SemifreeDga S = semifree_replacement(realized(e, n + 2, opt), n + 1, opt);
    TruncatedDga T = realize(S.stage(stage), n + 1, opt);
    GradedGroup H = homology(T, n + 1);
    std::string s = group_name(H.factors(n), T.ground());
    for (std::size_t i = 0; i < H.size(n); ++i)
      s += (i ? ", " : " by ") + T.monomials->presentation.format(T.monomials->lift(n, H.representative(n, i)));
    return s;
  }
  if (k == "hh" || k == "hh-powers") {
    const int lo = k == "hh" ? arg(c, 0) : 0, hi = k == "hh" ? arg(c, 1) : 2 * arg(c, 0);
    auto A = realized(e, hi + 3, opt);
    HochschildOptions o;
    o.realize = opt;
    o.ring = k == "hh-powers";
    CohomologyTable T = hochschild_cohomology(A, augmentation_bimodule(A), 0, lo, hi, o);
    if (k == "hh") return group_table(T.factors, T.ground);
    const HomologyRing& R = *T.ring;
    if (R.size(-2) != 1) throw HypothesisError("HH^2 is not cyclic");
    Vector s = unit_vector(1, 0), pw = s;
    std::string out = "s:" + zero_name(is_zero(R.reduce(-2, s)));
    for (int j = 2; j <= arg(c, 0); ++j) {
      pw = R.multiply(-2 * (j - 1), pw, -2, s);
      out += " s^" + std::to_string(j) + ":" + zero_name(is_zero(R.reduce(-2 * j, pw)));
    }
    return out;
  }
  if (k == "der") {
    const int m = arg(c, 0);
    auto A = realized(e, m + 4, opt);
    HochschildOptions o;
    o.realize = opt;
    CohomologyTable T = derivation_groups(A, augmentation_bimodule(A), 0, m, m, o);
    return group_name(T.at(m), T.ground);
  }
  if (k == "ho" || k == "orbits") {
    const int m = arg(c, 0);
    auto C = brutal_truncation(realized(e, 1, opt), 0);
    HoClassGroup G = homotopy_classes(C, augmentation_bimodule(C), m);
    if (k == "ho") return std::to_string(G.order());
    return std::to_string(classify_extensions(G, C.ground()).orbit_count());
  }
  if (k == "kinv") {
    const int n = arg(c, 0);
    auto A = realized(e, n + 3, opt);
    KInvariantClass K = k_invariant(A, n);
    return zero_name(K.cls == K.group->zero) + " in " + group_name(K.group->factors, A.ground());
  }
  if (k == "distinguish") {
    const int N = arg(c, 1);
    auto A = realized(e, N + 2, opt), B = realized(other(c), N + 2, opt);
    Distinction d = distinguish(A, B, N, opt);
    return d.verdict() + (d.distinguished ? " (" + d.kind + ")" : "");
  }
  if (k == "thh") {
    const int n = arg(c, 1);
    auto A = realized(e, n + 3, opt), B = realized(other(c), n + 3, opt);
    SigmaPolynomial a = sigma_coordinates(k_invariant(A, n)), b = sigma_coordinates(k_invariant(B, n));
    return topological_equivalence_verdict(a, b).verdict;
  }
  throw std::invalid_argument("unknown check kind: " + k);
}

std::vector<CheckResult> verify_catalog(const RealizeOptions& opt, const std::function<void(const CheckResult&)>& progress) {
  std::vector<CheckResult> out;
  for (const auto& e : catalog())
    for (const auto& c : e.checks) {
      CheckResult r;
      r.entry = e.id;
      r.kind = c.kind;
      for (const auto& a : c.args) r.args += (r.args.empty() ? "" : " ") + a;
      r.expected = c.expected;
      r.source = c.source;
      try {
        r.actual = evaluate_check(e, c, opt);
      } catch (const std::exception& ex) {
        r.actual = std::string("error: ") + ex.what();
      }
      r.pass = r.actual == r.expected;
      if (progress) progress(r);
      out.push_back(std::move(r));
    }
  return out;
}

}  // namespace dgatk
