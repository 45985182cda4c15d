#include "dgatk/complex.hpp"

#include <stdexcept>

namespace dgatk {

Matrix CyclicSum::relations() const {
  std::vector<Vector> cols;
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (!orders[i].is_zero()) {
      Vector v(orders.size());
      v[i] = orders[i];
      cols.push_back(std::move(v));
    }
  return Matrix::from_columns(orders.size(), cols);
}

Vector CyclicSum::reduce(Vector v, const Ground& g) const {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (g.is_field())
      v[i] = g.normalize(v[i]);
    else if (!orders[i].is_zero())
      v[i] = floor_mod(v[i], orders[i]);
  }
  return v;
}

ChainComplex::ChainComplex(const Ground& g, int l, int h) : ground(g), lo(l), hi(h) {
  if (h >= l) {
    groups.resize(static_cast<std::size_t>(h - l + 1));
    diffs.resize(groups.size());
  }
}

Matrix ChainComplex::d(int n) const {
  if (!in_range(n)) return Matrix(dim(n - 1), dim(n));
  const Matrix& m = diffs[static_cast<std::size_t>(n - lo)];
  if (m.rows() != dim(n - 1) || m.cols() != dim(n)) return Matrix(dim(n - 1), dim(n));
  return m;
}

void ChainComplex::set_d(int n, Matrix m) {
  if (!in_range(n)) throw std::out_of_range("set_d outside range");
  if (m.cols() != dim(n) || m.rows() != dim(n - 1)) throw std::invalid_argument("set_d: shape mismatch");
  diffs[static_cast<std::size_t>(n - lo)] = std::move(m);
}

Vector ChainComplex::reduce(int n, Vector v) const { return group(n).reduce(std::move(v), ground); }

Vector ChainComplex::apply_d(int n, const Vector& v) const {
  if (!in_range(n - 1)) return {};
  Vector r(dim(n - 1));
  if (!in_range(n)) return r;
  const Matrix& m = diffs[static_cast<std::size_t>(n - lo)];
  if (m.rows() != r.size() || m.cols() != v.size()) return r;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].is_zero()) continue;
    for (std::size_t i = 0; i < r.size(); ++i)
      if (!m(i, j).is_zero()) r[i] += m(i, j) * v[j];
  }
  return reduce(n - 1, std::move(r));
}

bool ChainComplex::is_complex(std::string* witness) const {
  for (int n = lo + 2; n <= hi; ++n) {
    Matrix dd = d(n - 1) * d(n);
    for (std::size_t c = 0; c < dd.cols(); ++c) {
      Vector v = reduce(n - 2, dd.column(c));
      if (!is_zero(v)) {
        if (witness) *witness = "d^2 != 0 on basis element " + std::to_string(c) + " of degree " + std::to_string(n);
        return false;
      }
    }
  }
  return true;
}

GradedGroup::GradedGroup(const ChainComplex& c, int lo, int hi) : ground_(c.ground), lo_(lo), hi_(hi) {
  if (lo < c.homology_lo() || hi > c.homology_hi()) throw std::out_of_range("homology requested outside the valid range");
  for (int n = lo; n <= hi; ++n) {
    const std::size_t k = c.dim(n);
    Matrix out = c.d(n);
    Matrix out_rel = c.in_range(n - 1) ? c.group(n - 1).relations() : Matrix(0, 0);
    if (out.rows() == 0) out_rel = Matrix(0, 0);
    Matrix bnd = c.d(n + 1);
    Matrix rel = c.group(n).relations();
    Matrix all = bnd.cols() ? (rel.cols() ? bnd.hconcat(rel) : bnd) : rel;
    if (all.rows() != k) all = Matrix(k, 0);
    degrees_.emplace_back(k, out, out_rel, all, c.ground);
    boundaries_.emplace_back(all, c.ground);
    const Subquotient& sq = degrees_.back();
    std::vector<Vector> reps;
    std::vector<int> signs;
    for (std::size_t i = 0; i < sq.size(); ++i) {
      Vector r = c.reduce(n, boundaries_.back().reduce(sq.representative(i)));
      int s = 1;
      for (const auto& x : r)
        if (!x.is_zero()) {
          if (x.sign() < 0 && !c.ground.is_field()) s = -1;
          break;
        }
      if (s < 0) r = c.reduce(n, boundaries_.back().reduce(scale(r, Integer(-1))));
      reps.push_back(std::move(r));
      signs.push_back(s);
    }
    reps_.push_back(std::move(reps));
    signs_.push_back(std::move(signs));
  }
}

const Vector& GradedGroup::representative(int n, std::size_t i) const {
  return reps_.at(static_cast<std::size_t>(n - lo_)).at(i);
}

Vector GradedGroup::representative_of(int n, const Vector& q) const {
  const auto& reps = reps_.at(static_cast<std::size_t>(n - lo_));
  Vector v(at(n).ambient());
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!q[i].is_zero()) v = add(v, scale(reps[i], q[i]));
  return boundaries_.at(static_cast<std::size_t>(n - lo_)).reduce(v);
}

std::optional<Vector> GradedGroup::classify(int n, const Vector& cycle) const {
  auto q = at(n).classify(cycle);
  if (!q) return q;
  const auto& s = signs_.at(static_cast<std::size_t>(n - lo_));
  for (std::size_t i = 0; i < q->size(); ++i)
    if (s[i] < 0) (*q)[i] = at(n).structure().reduce(scale(*q, Integer(-1)))[i];
  return q;
}

bool GradedGroup::same_groups(const GradedGroup& o, int* first_difference) const {
  for (int n = std::max(lo_, o.lo_); n <= std::min(hi_, o.hi_); ++n)
    if (factors(n) != o.factors(n)) {
      if (first_difference) *first_difference = n;
      return false;
    }
  return true;
}

std::string group_name(const std::vector<Integer>& factors, const Ground& g) {
  if (factors.empty()) return "0";
  std::string s;
  for (const auto& f : factors) {
    if (!s.empty()) s += " + ";
    if (g.is_field())
      s += g.name();
    else if (f.is_zero())
      s += "Z";
    else
      s += "Z/" + f.str();
  }
  return s;
}

}  // namespace dgatk
