#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgatk/ground.hpp"
#include "dgatk/integer.hpp"

namespace dgatk {

/// A word in the generators, as indices into the generator list.
using Word = std::vector<int>;

/// Orders words by length, then lexicographically by generator index.
struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Noncommutative polynomial: finitely many words with nonzero coefficients.
class Polynomial {
public:
  using Terms = std::map<Word, Integer, WordLess>;

  Polynomial() = default;
  static Polynomial constant(const Integer& c);
  static Polynomial word(Word w, const Integer& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add_term(const Word& w, const Integer& c);
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator-() const;
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Integer& c) const;
  /// Reduce coefficients into the ground ring's canonical range, dropping zeros.
  Polynomial normalized(const Ground& g) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

private:
  Terms terms_;
};

struct Generator {
  std::string name;
  int degree = 1;
  int stage = 0;  // 0 = no stage annotation
  friend bool operator==(const Generator&, const Generator&) = default;
};

/// A dga presented by graded generators, differentials and homogeneous relations.
struct DgaPresentation {
  std::string name;
  Ground ground;
  std::vector<Generator> generators;
  std::vector<Polynomial> differentials;  // one per generator; zero when omitted
  std::vector<Polynomial> relations;

  int find_generator(const std::string& name) const;  // -1 when absent
  int add_generator(const std::string& name, int degree, const Polynomial& d = {}, int stage = 0);
  int word_degree(const Word& w) const;
  /// Degree of a homogeneous polynomial; -1 for zero, throws on inhomogeneous input.
  int degree(const Polynomial& p) const;
  bool is_homogeneous(const Polynomial& p) const;
  /// Differential on the free algebra: d(ab) = d(a)b + (-1)^{|a|} a d(b).
  Polynomial d(const Polynomial& p) const;
  Polynomial d_word(const Word& w) const;
  std::string format(const Polynomial& p) const;
  std::string format_word(const Word& w) const;
  bool has_stages() const;

  friend bool operator==(const DgaPresentation&, const DgaPresentation&) = default;
};

/// Parse the presentation language; throws ParseError with a source position.
DgaPresentation parse_presentation(const std::string& text);
/// Parse a bare polynomial over the generators of `p`.
Polynomial parse_polynomial(const DgaPresentation& p, const std::string& text);
std::string to_text(const DgaPresentation& p);

}  // namespace dgatk
