#include "dgatk/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dgatk/errors.hpp"

namespace dgatk {

Polynomial Polynomial::constant(const Integer& c) { return word({}, c); }

Polynomial Polynomial::word(Word w, const Integer& c) {
  Polynomial p;
  p.add_term(w, c);
  return p;
}

void Polynomial::add_term(const Word& w, const Integer& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [wa, ca] : a.terms_)
    for (const auto& [wb, cb] : b.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      r.add_term(w, ca * cb);
    }
  return r;
}

Polynomial Polynomial::scaled(const Integer& c) const {
  Polynomial r;
  if (c.is_zero()) return r;
  for (const auto& [w, v] : terms_) r.terms_.emplace(w, v * c);
  return r;
}

Polynomial Polynomial::normalized(const Ground& g) const {
  if (!g.is_field()) return *this;
  Polynomial r;
  for (const auto& [w, v] : terms_) r.add_term(w, g.normalize(v));
  return r;
}

int DgaPresentation::find_generator(const std::string& n) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].name == n) return static_cast<int>(i);
  return -1;
}

int DgaPresentation::add_generator(const std::string& n, int deg, const Polynomial& dv, int stage) {
  generators.push_back({n, deg, stage});
  differentials.push_back(dv);
  return static_cast<int>(generators.size()) - 1;
}

int DgaPresentation::word_degree(const Word& w) const {
  int d = 0;
  for (int g : w) d += generators.at(static_cast<std::size_t>(g)).degree;
  return d;
}

int DgaPresentation::degree(const Polynomial& p) const {
  int deg = -1;
  for (const auto& [w, c] : p.terms()) {
    int d = word_degree(w);
    if (deg >= 0 && d != deg) throw HypothesisError("inhomogeneous polynomial " + format(p));
    deg = d;
  }
  return deg;
}

bool DgaPresentation::is_homogeneous(const Polynomial& p) const {
  int deg = -1;
  for (const auto& [w, c] : p.terms()) {
    int d = word_degree(w);
    if (deg >= 0 && d != deg) return false;
    deg = d;
  }
  return true;
}

Polynomial DgaPresentation::d_word(const Word& w) const {
  Polynomial r;
  int prefix = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto g = static_cast<std::size_t>(w[i]);
    const Polynomial& dg = differentials[g];
    if (!dg.is_zero()) {
      Word left(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      Word right(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
      Integer sign = (prefix % 2) ? -1 : 1;
      for (const auto& [m, c] : dg.terms()) {
        Word x = left;
        x.insert(x.end(), m.begin(), m.end());
        x.insert(x.end(), right.begin(), right.end());
        r.add_term(x, sign * c);
      }
    }
    prefix += generators[g].degree;
  }
  return r;
}

Polynomial DgaPresentation::d(const Polynomial& p) const {
  Polynomial r;
  for (const auto& [w, c] : p.terms()) r += d_word(w).scaled(c);
  return r.normalized(ground);
}

std::string DgaPresentation::format_word(const Word& w) const {
  std::string s;
  for (std::size_t i = 0; i < w.size();) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (!s.empty()) s += "*";
    s += generators.at(static_cast<std::size_t>(w[i])).name;
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::string DgaPresentation::format(const Polynomial& p) const {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Word, Integer>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const auto& a, const auto& b) { return word_degree(a.first) < word_degree(b.first); });
  std::string s;
  for (const auto& [w, c] : terms) {
    bool neg = c.sign() < 0;
    Integer mag = abs(c);
    if (s.empty())
      s += neg ? "-" : "";
    else
      s += neg ? " - " : " + ";
    if (w.empty()) {
      s += mag.str();
    } else {
      if (!mag.is_one()) s += mag.str() + "*";
      s += format_word(w);
    }
  }
  return s;
}

bool DgaPresentation::has_stages() const {
  return std::any_of(generators.begin(), generators.end(), [](const Generator& g) { return g.stage != 0; });
}

namespace {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
        t.text += advance();
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Int;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) t.text += advance();
    } else if (c == '"') {
      t.kind = Tok::String;
      advance();
      while (pos_ < s_.size() && s_[pos_] != '"' && s_[pos_] != '\n') t.text += advance();
      if (pos_ >= s_.size() || s_[pos_] != '"') throw ParseError("unterminated string", t.line, t.col);
      advance();
    } else if (std::string_view("{}():;=*^+-<>").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, advance());
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
    }
    return t;
  }

private:
  char advance() {
    char c = s_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
public:
  Parser(const std::string& text, DgaPresentation* target) : lex_(text), p_(target) { tok_ = lex_.next(); }

  void presentation() {
    expect_keyword("dga");
    if (tok_.kind != Tok::String) fail("expected a quoted name");
    p_->name = tok_.text;
    bump();
    expect_keyword("over");
    ground();
    expect("{");
    while (!is("}")) {
      if (tok_.kind == Tok::End) fail("unexpected end of input, expected '}'");
      statement();
    }
    bump();
    if (tok_.kind != Tok::End) fail("trailing input after '}'");
  }

  Polynomial lone_polynomial() {
    Polynomial r = poly();
    if (tok_.kind != Tok::End) fail("trailing input after polynomial");
    return r;
  }

private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.col); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const { throw ParseError(msg, t.line, t.col); }
  void bump() { tok_ = lex_.next(); }
  bool is(const char* punct) const { return tok_.kind == Tok::Punct && tok_.text == punct; }
  bool is_keyword(const char* kw) const { return tok_.kind == Tok::Ident && tok_.text == kw; }

  void expect(const char* punct) {
    if (!is(punct)) fail(std::string("expected '") + punct + "'");
    bump();
  }

  void expect_keyword(const char* kw) {
    if (!is_keyword(kw)) fail(std::string("expected '") + kw + "'");
    bump();
  }

  long small_int(const Token& t) const {
    if (t.text.size() > 9) fail_at(t, "integer too large here");
    return std::stol(t.text);
  }

  void ground() {
    Token t = tok_;
    if (t.kind != Tok::Ident) fail("expected Z or F<p>");
    if (t.text == "Z") {
      p_->ground = Ground::integers();
      bump();
      return;
    }
    if (t.text == "F") {
      bump();
      bool angle = is("<");
      if (angle) bump();
      if (tok_.kind != Tok::Int) fail("expected a prime after F");
      Token num = tok_;
      bump();
      if (angle) expect(">");
      set_field(num, small_int(num));
      return;
    }
    if (t.text.size() > 1 && t.text[0] == 'F' &&
        std::all_of(t.text.begin() + 1, t.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      bump();
      Token num = t;
      num.text = t.text.substr(1);
      set_field(t, small_int(num));
      return;
    }
    fail("expected Z or F<p>");
  }

  void set_field(const Token& at, long p) {
    if (!is_prime(p)) fail_at(at, "modulus " + std::to_string(p) + " is not prime");
    p_->ground = Ground::prime_field(p);
  }

  void statement() {
    if (is_keyword("gen")) {
      bump();
      Token name = tok_;
      if (name.kind != Tok::Ident) fail("expected generator name");
      if (p_->find_generator(name.text) >= 0) fail("duplicate generator '" + name.text + "'");
      bump();
      expect(":");
      bool neg = false;
      if (is("-")) {
        neg = true;
        bump();
      }
      if (tok_.kind != Tok::Int) fail("expected generator degree");
      Token dt = tok_;
      long deg = small_int(dt);
      bump();
      if (neg || deg <= 0) fail_at(dt, "generator '" + name.text + "' must have positive degree");
      int stage = 0;
      if (is_keyword("stage")) {
        bump();
        if (tok_.kind != Tok::Int) fail("expected stage number");
        stage = static_cast<int>(small_int(tok_));
        bump();
      }
      p_->add_generator(name.text, static_cast<int>(deg), {}, stage);
      expect(";");
    } else if (is_keyword("diff")) {
      bump();
      Token name = tok_;
      if (name.kind != Tok::Ident) fail("expected generator name");
      int g = p_->find_generator(name.text);
      if (g < 0) fail("unknown generator '" + name.text + "'");
      bump();
      expect("=");
      Token at = tok_;
      Polynomial d = poly().normalized(p_->ground);
      if (!p_->is_homogeneous(d)) fail_at(at, "inhomogeneous differential for '" + name.text + "'");
      int want = p_->generators[static_cast<std::size_t>(g)].degree - 1;
      int have = p_->degree(d);
      if (have >= 0 && have != want)
        fail_at(at, "differential degree mismatch for '" + name.text + "': " + p_->format(d) + " has degree " +
                        std::to_string(have) + ", need " + std::to_string(want));
      if (!set_.insert(g).second) fail_at(name, "second differential for '" + name.text + "'");
      p_->differentials[static_cast<std::size_t>(g)] = d;
      expect(";");
    } else if (is_keyword("rel")) {
      bump();
      Token at = tok_;
      Polynomial r = poly().normalized(p_->ground);
      if (!p_->is_homogeneous(r)) fail_at(at, "inhomogeneous relation " + p_->format(r));
      if (!r.is_zero()) p_->relations.push_back(r);
      expect(";");
    } else {
      fail("expected 'gen', 'diff' or 'rel'");
    }
  }

  Polynomial poly() {
    Polynomial r;
    bool neg = false;
    if (is("+") || is("-")) {
      neg = is("-");
      bump();
    }
    Polynomial t = term();
    r += neg ? -t : t;
    while (is("+") || is("-")) {
      neg = is("-");
      bump();
      t = term();
      r += neg ? -t : t;
    }
    return r;
  }

  Polynomial term() {
    Polynomial r = factor();
    while (is("*")) {
      bump();
      r = r * factor();
    }
    return r;
  }

  Polynomial factor() {
    Polynomial a = atom();
    if (is("^")) {
      bump();
      if (tok_.kind != Tok::Int) fail("expected exponent");
      long e = small_int(tok_);
      bump();
      Polynomial r = Polynomial::constant(1);
      for (long i = 0; i < e; ++i) r = r * a;
      return r;
    }
    return a;
  }

  Polynomial atom() {
    if (tok_.kind == Tok::Int) {
      Polynomial r = Polynomial::constant(Integer(std::string_view(tok_.text)));
      bump();
      return r;
    }
    if (tok_.kind == Tok::Ident) {
      int g = p_->find_generator(tok_.text);
      if (g < 0) fail("unknown generator '" + tok_.text + "'");
      bump();
      return Polynomial::word({g});
    }
    if (is("(")) {
      bump();
      Polynomial r = poly();
      expect(")");
      return r;
    }
    fail("expected an integer, a generator or '('");
  }

  Lexer lex_;
  Token tok_;
  DgaPresentation* p_;
  std::set<int> set_;
};

}  // namespace

DgaPresentation parse_presentation(const std::string& text) {
  DgaPresentation p;
  Parser(text, &p).presentation();
  return p;
}

Polynomial parse_polynomial(const DgaPresentation& p, const std::string& text) {
  DgaPresentation copy = p;
  return Parser(text, &copy).lone_polynomial().normalized(p.ground);
}

std::string to_text(const DgaPresentation& p) {
  std::ostringstream os;
  os << "dga \"" << p.name << "\" over " << p.ground.name() << " {\n";
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    const auto& g = p.generators[i];
    os << "  gen " << g.name << ":" << g.degree;
    if (g.stage) os << " stage " << g.stage;
    os << ";\n";
  }
  for (std::size_t i = 0; i < p.generators.size(); ++i)
    if (!p.differentials[i].is_zero()) os << "  diff " << p.generators[i].name << " = " << p.format(p.differentials[i]) << ";\n";
  for (const auto& r : p.relations) os << "  rel " << p.format(r) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace dgatk
