#include "dgatk/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "dgatk/catalog.hpp"
#include "dgatk/errors.hpp"
#include "dgatk/report.hpp"

namespace dgatk {

namespace {

struct Settings {
  std::vector<std::string> inputs;
  int max_degree = -1;
  int n = -1;
  std::string ground;
  long prime = 0;
  std::string format = "text";
  std::size_t monomial_cap = 20000;
  unsigned long seed = 0;
  std::string route = "small";
  bool ring = false;
  bool timing = false;
  std::vector<long> module_orders;
  int module_degree = 0;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

DgaPresentation load(const std::string& input, const Settings& s) {
  DgaPresentation p;
  if (input.rfind("examples:", 0) == 0) {
    const CatalogEntry* e = find_entry(input.substr(9));
    if (!e) throw UsageError("unknown input: " + input);
    p = e->presentation();
  } else {
    std::ifstream f(input);
    if (!f) throw UsageError("unknown input: " + input);
    std::stringstream buf;
    buf << f.rdbuf();
    p = parse_presentation(buf.str());
  }
  if (!s.ground.empty()) {
    if (s.ground == "Z") p.ground = Ground::integers();
    else if (s.ground == "Fp") {
      if (s.prime < 2) throw UsageError("--ground Fp needs --prime");
      p.ground = Ground::prime_field(s.prime);
    } else if (s.ground.size() > 1 && s.ground[0] == 'F') p.ground = Ground::prime_field(std::stol(s.ground.substr(1)));
    else throw UsageError("unknown ground: " + s.ground);
  }
  return p;
}

RealizeOptions realize_options(const Settings& s) {
  RealizeOptions o;
  o.monomial_cap = s.monomial_cap;
  return o;
}

int need_degree(const Settings& s) {
  if (s.max_degree < 0) throw UsageError("--max-degree is required");
  return s.max_degree;
}

int need_n(const Settings& s) {
  if (s.n < 0) throw UsageError("--n is required");
  return s.n;
}

Json integers(const std::vector<Integer>& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

Json group_row(int n, const std::vector<Integer>& f, const Ground& g, int valid) {
  Json r;
  r["degree"] = n;
  r["group"] = group_name(f, g);
  r["factors"] = integers(f);
  r["valid_through"] = valid;
  return r;
}

Json groups_json(const std::map<int, std::vector<Integer>>& t, const Ground& g, int valid) {
  Json a = Json::array();
  for (const auto& [n, f] : t) a.push_back(group_row(n, f, g, valid));
  return a;
}

Json ring_products(const HomologyRing& R, int lo, int hi, bool negate, int valid) {
  Json a = Json::array();
  for (int x = lo; x <= hi; ++x)
    for (int y = lo; y <= hi; ++y) {
      if (!R.defined(x, y) || x + y < lo || x + y > hi) continue;
      if (x == 0 || y == 0) continue;
      for (std::size_t i = 0; i < R.size(x); ++i)
        for (std::size_t j = 0; j < R.size(y); ++j) {
          Vector v = R.reduce(x + y, R.basis_product(x, i, y, j));
          if (is_zero(v)) continue;
          Json r;
          r["left"] = std::to_string(negate ? -x : x) + "." + std::to_string(i);
          r["right"] = std::to_string(negate ? -y : y) + "." + std::to_string(j);
          r["degree"] = negate ? -(x + y) : x + y;
          r["product"] = integers(v);
          r["valid_through"] = valid;
          a.push_back(r);
        }
    }
  return a;
}

Bimodule coefficient_module(const TruncatedDga& C, const Settings& s) {
  if (s.module_orders.empty()) return augmentation_bimodule(C);
  std::vector<Integer> o;
  for (long x : s.module_orders) o.push_back(Integer(x));
  return scalar_bimodule(C, o);
}

Json sigma_json(const SigmaPolynomial& s) { return s.str(); }

RunReport dispatch(const std::string& cmd, const Settings& s, std::ostream& err) {
  RunReport r;
  r.command = cmd;
  r.inputs = s.inputs;
  const RealizeOptions opt = realize_options(s);
  auto progress = [&](const std::string& m) { err << "[" << cmd << "] " << m << std::endl; };
  auto input = [&](std::size_t i) {
    if (i >= s.inputs.size()) throw UsageError(cmd + " needs " + std::to_string(i + 1) + " input(s)");
    return load(s.inputs[i], s);
  };

  if (cmd == "validate") {
    const int N = s.max_degree < 0 ? 6 : s.max_degree;
    ValidationReport v = validate(input(0), N, s.monomial_cap);
    r.validity = v.checked_through;
    r.results["ok"] = v.ok();
    Json issues = Json::array();
    for (const auto& i : v.issues) issues.push_back({{"kind", i.kind}, {"message", i.message}, {"witness", i.witness}});
    r.results["issues"] = issues;
    if (!v.ok()) throw HypothesisError(v.issues.front().kind + ": " + v.issues.front().message);
    return r;
  }
  if (cmd == "homology") {
    const int N = need_degree(s);
    progress("realizing through degree " + std::to_string(N + 1));
    TruncatedDga A = realize(input(0), N + 1, opt);
    HomologyRing R = homology_ring(A, N + 1);
    std::map<int, std::vector<Integer>> t;
    for (int n = 0; n <= std::min(N, R.hi()); ++n) t[n] = R.factors(n);
    r.validity = std::min(N, R.hi());
    r.results["ground"] = A.ground().name();
    r.results["groups"] = groups_json(t, A.ground(), r.validity);
    Json reps = Json::array();
    for (const auto& [n, f] : t)
      for (std::size_t i = 0; i < f.size(); ++i)
        reps.push_back({{"class", std::to_string(n) + "." + std::to_string(i)},
                        {"representative", A.monomials->presentation.format(A.monomials->lift(n, R.groups().representative(n, i)))}});
    r.results["generators"] = reps;
    r.results["products"] = ring_products(R, 0, r.validity, false, r.validity);
    return r;
  }
  if (cmd == "resolve") {
    const int N = need_degree(s);
    TruncatedDga A = realize(input(0), N + 1, opt);
    progress("attaching cells through degree " + std::to_string(N));
    SemifreeDga S = semifree_replacement(A, N, opt);
    r.validity = S.validity;
    Json g = Json::array();
    const auto& P = S.presentation;
    for (std::size_t i = 0; i < P.generators.size(); ++i)
      g.push_back({{"name", P.generators[i].name},
                   {"degree", P.generators[i].degree},
                   {"stage", P.generators[i].stage},
                   {"d", P.differentials[i].is_zero() ? "0" : P.format(P.differentials[i])},
                   {"image", integers(S.images[i])}});
    r.results["generators"] = g;
    r.results["presentation"] = to_text(P);
    r.warnings = S.notes;
    return r;
  }
  if (cmd == "postnikov") {
    const int N = need_degree(s), n = need_n(s);
    TruncatedDga A = realize(input(0), N + 1, opt);
    progress("replacement through degree " + std::to_string(N));
    SemifreeDga Q = semifree_replacement(A, N, opt);
    progress("section at " + std::to_string(n));
    SemifreeDga S = postnikov_section(Q, n, N, opt);
    TruncatedDga T = S.realize(N, opt);
    GradedGroup H = homology(T, N);
    std::map<int, std::vector<Integer>> t;
    for (int k = 0; k < N; ++k) t[k] = H.factors(k);
    r.validity = N - 1;
    r.results["n"] = n;
    r.results["section_homology"] = groups_json(t, T.ground(), N - 1);
    Json g = Json::array();
    const auto& P = S.presentation;
    for (std::size_t i = Q.presentation.generators.size(); i < P.generators.size(); ++i)
      g.push_back({{"name", P.generators[i].name}, {"degree", P.generators[i].degree}, {"d", P.format(P.differentials[i])}});
    r.results["attached"] = g;
    return r;
  }
  if (cmd == "tensor") {
    const int N = need_degree(s);
    TruncatedDga A = realize(input(0), N + 2, opt);
    TruncatedDga B;
    if (s.inputs.size() >= 2) B = realize(input(1), N + 2, opt);
    else if (s.prime >= 2) B = koszul_model(s.prime, N + 2);
    else throw UsageError("tensor needs a second input or --prime");
    progress("derived tensor through degree " + std::to_string(N));
    DerivedTensor T = derived_tensor(A, B, N, opt);
    std::map<int, std::vector<Integer>> t;
    for (int n = T.ring.lo(); n <= T.ring.hi(); ++n) t[n] = T.ring.factors(n);
    r.validity = T.ring.hi();
    r.results["path"] = T.path;
    r.results["groups"] = groups_json(t, A.ground(), r.validity);
    r.results["products"] = ring_products(T.ring, 0, r.validity, false, r.validity);
    auto f = ring_fingerprint(T.ring);
    if (f.degree1_squares_zero) r.results["degree1_squares_zero"] = *f.degree1_squares_zero;
    return r;
  }
  if (cmd == "hh" || cmd == "der") {
    const int N = need_degree(s);
    const int lo = 0;
    TruncatedDga A = realize(input(0), N + s.module_degree + 4, opt);
    Bimodule M = coefficient_module(A, s);
    HochschildOptions o;
    o.route = s.route;
    o.ring = s.ring && cmd == "hh";
    o.realize = opt;
    progress("resolving the diagonal through degree " + std::to_string(N + s.module_degree + 2));
    CohomologyTable T = cmd == "hh" ? hochschild_cohomology(A, M, s.module_degree, lo, N, o)
                                    : derivation_groups(A, M, s.module_degree, lo, N, o);
    r.validity = N;
    r.results["ground"] = T.ground.name();
    r.results["module_degree"] = s.module_degree;
    r.results["module"] = group_name(M.orders, T.ground);
    r.results["cohomology"] = groups_json(T.factors, T.ground, N);
    if (T.ring) r.results["products"] = ring_products(*T.ring, -N, 0, true, N);
    r.results["provenance"] = T.provenance;
    return r;
  }
  if (cmd == "kinv" || cmd == "classify") {
    const int n = need_n(s);
    TruncatedDga A = realize(input(0), n + 3, opt);
    progress("classes of maps into the square-zero extension in degree " + std::to_string(n + 2));
    KInvariantClass K = k_invariant(A, n);
    const HoClassGroup& G = *K.group;
    r.validity = n + 2;
    r.results["n"] = n;
    r.results["group"] = group_name(G.factors, A.ground());
    r.results["group_order"] = G.order();
    if (cmd == "kinv") {
      r.results["class"] = K.cls;
      r.results["zero"] = K.cls == G.zero;
      r.results["representative"] = G.describe(K.cls);
      try {
        r.results["sigma"] = sigma_json(sigma_coordinates(K));
      } catch (const HypothesisError& e) {
        r.warnings.push_back(std::string("no sigma coordinates: ") + e.what());
      }
      return r;
    }
    OrbitReport O = classify_extensions(G, A.ground());
    r.results["automorphisms"] = O.automorphisms;
    Json orbits = Json::array();
    for (const auto& orb : O.orbits) {
      Json a = Json::array();
      for (std::size_t c : orb) a.push_back(G.describe(c));
      orbits.push_back(a);
    }
    r.results["orbit_count"] = O.orbit_count();
    r.results["orbits"] = orbits;
    r.results["input_orbit"] = [&] {
      for (std::size_t i = 0; i < O.orbits.size(); ++i)
        for (std::size_t c : O.orbits[i])
          if (c == K.cls) return i;
      return O.orbits.size();
    }();
    return r;
  }
  if (cmd == "thh-compare") {
    const int n = need_n(s);
    TruncatedDga A = realize(input(0), n + 3, opt), B = realize(input(1), n + 3, opt);
    SigmaPolynomial a = sigma_coordinates(k_invariant(A, n)), b = sigma_coordinates(k_invariant(B, n));
    TopologicalVerdict v = topological_equivalence_verdict(a, b);
    r.validity = n + 2;
    r.results["k1"] = a.str();
    r.results["k2"] = b.str();
    r.results["image1"] = v.image1.str();
    r.results["image2"] = v.image2.str();
    r.results["verdict"] = v.verdict;
    r.results["criterion"] = v.criterion;
    r.results["reference"] = v.reference;
    r.warnings.push_back("the sigma generator is fixed up to a unit; zero and nonzero images do not depend on the choice");
    return r;
  }
  if (cmd == "distinguish") {
    const int N = need_degree(s);
    TruncatedDga A = realize(input(0), N + 2, opt), B = realize(input(1), N + 2, opt);
    Distinction d = distinguish(A, B, N, opt);
    r.validity = d.checked_through;
    r.results["verdict"] = d.verdict();
    r.results["distinguished"] = d.distinguished;
    if (d.distinguished) {
      r.results["kind"] = d.kind;
      r.results["witness"] = d.witness;
    }
    return r;
  }
  if (cmd == "catalog") {
    Json a = Json::array();
    for (const auto& e : catalog()) {
      Json c = Json::array();
      for (const auto& x : e.checks) {
        std::string args;
        for (const auto& y : x.args) args += (args.empty() ? "" : " ") + y;
        c.push_back({{"check", x.kind}, {"args", args}, {"expected", x.expected}, {"source", x.source}});
      }
      Json j = {{"id", e.id}, {"description", e.description}, {"presentation", e.text}};
      if (!e.notes.empty()) j["notes"] = e.notes;
      j["expected"] = c;
      a.push_back(j);
    }
    r.results["entries"] = a;
    return r;
  }
  if (cmd == "verify-catalog") {
    std::size_t failed = 0;
    Json a = Json::array();
    for (const auto& c : verify_catalog(opt, [&](const CheckResult& c) {
           progress((c.pass ? "pass " : "FAIL ") + c.entry + " " + c.kind + " " + c.args);
         })) {
      if (!c.pass) ++failed;
      a.push_back({{"entry", c.entry}, {"check", c.kind}, {"args", c.args}, {"expected", c.expected},
                   {"actual", c.actual}, {"source", c.source}, {"pass", c.pass}});
    }
    r.results["checks"] = a;
    r.results["failed"] = failed;
    if (failed) r.warnings.push_back(std::to_string(failed) + " catalog checks failed");
    return r;
  }
  throw UsageError("unknown command: " + cmd);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Computations with finitely presented differential graded algebras", "dga"};
  app.require_subcommand(1);
  Settings s;
  auto common = [&](CLI::App* c) {
    c->add_option("--max-degree", s.max_degree, "truncation degree");
    c->add_option("--ground", s.ground, "ground ring override: Z, Fp or F<p>");
    c->add_option("--prime", s.prime, "prime for --ground Fp and single-input tensor");
    c->add_option("--format", s.format, "text or json")->check(CLI::IsMember({"text", "json", "json-like"}));
    c->add_option("--monomial-cap", s.monomial_cap, "monomials per degree");
    c->add_option("--seed", s.seed, "seed for randomized checks; never changes results");
    c->add_flag("--timing", s.timing, "include timing in the report");
  };
  struct Spec {
    const char* name;
    const char* help;
    int inputs;  // -1: none
  };
  const Spec specs[] = {{"validate", "check a presentation", 1},
                        {"homology", "homology ring", 1},
                        {"resolve", "semifree replacement", 1},
                        {"postnikov", "Postnikov section", 1},
                        {"tensor", "derived tensor product", 2},
                        {"hh", "Hochschild cohomology", 1},
                        {"der", "derivation groups", 1},
                        {"kinv", "k-invariant", 1},
                        {"classify", "extensions up to automorphisms", 1},
                        {"thh-compare", "compare k-invariant images in THH", 2},
                        {"distinguish", "look for a quasi-isomorphism obstruction", 2},
                        {"catalog", "list builtin examples", -1},
                        {"verify-catalog", "recompute every catalog value", -1}};
  for (const auto& sp : specs) {
    CLI::App* c = app.add_subcommand(sp.name, sp.help);
    common(c);
    if (sp.inputs > 0) {
      auto* o = c->add_option("inputs", s.inputs, "file path or examples:<id>");
      if (std::string(sp.name) != "tensor") o->expected(sp.inputs);
      else o->expected(1, 2);
    }
    if (std::string(sp.name) == "postnikov" || std::string(sp.name) == "kinv" || std::string(sp.name) == "classify" ||
        std::string(sp.name) == "thh-compare")
      c->add_option("--n", s.n, "Postnikov level");
    if (std::string(sp.name) == "hh" || std::string(sp.name) == "der") {
      c->add_option("--route", s.route, "small or kill-cycles")->check(CLI::IsMember({"small", "kill-cycles"}));
      c->add_option("--module-orders", s.module_orders, "orders of the cyclic summands of M (default H_0)")->delimiter(',');
      c->add_option("--module-degree", s.module_degree, "degree of M");
      if (std::string(sp.name) == "hh") c->add_flag("--ring", s.ring, "products from the endomorphism dga");
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    auto t0 = std::chrono::steady_clock::now();
    RunReport r = dispatch(cmd, s, err);
    if (s.timing)
      r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out << export_report(r, s.format);
    if (cmd == "verify-catalog" && r.results["failed"].get<std::size_t>() > 0) return kHypothesis;
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource cap: " << e.what() << "\n";
    return kResource;
  } catch (const HypothesisError& e) {
    err << "hypothesis failed: " << e.what() << "\n";
    return kHypothesis;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesis;
  }
}

}  // namespace dgatk
