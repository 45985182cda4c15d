#include "dgatk/linalg.hpp"

#include <algorithm>
#include <stdexcept>

#include "dgatk/errors.hpp"

namespace dgatk {

Matrix SmithForm::D(std::size_t rows, std::size_t cols) const {
  Matrix d(rows, cols);
  for (std::size_t i = 0; i < rank; ++i) d(i, i) = diagonal[i];
  return d;
}

namespace {

/// Working state for the elimination. Rows/cols below `t` are finished, so
/// row and column operations only touch the trailing block of A.
class SmithWorker {
public:
  SmithWorker(const Matrix& M, const Ground& g, unsigned want)
      : g_(g), A_(M), m_(M.rows()), n_(M.cols()), want_(want) {
    A_.normalize(g);
    if (want & kSmithU) U_ = Matrix::identity(m_);
    if (want & kSmithUinv) Uinv_ = Matrix::identity(m_);
    if (want & kSmithV) V_ = Matrix::identity(n_);
  }

  SmithForm run() {
    SmithForm out;
    const std::size_t lim = std::min(m_, n_);
    for (t_ = 0; t_ < lim; ++t_) {
      std::size_t pi = 0, pj = 0;
      if (!find_pivot(pi, pj)) break;
      swap_rows(t_, pi);
      swap_cols(t_, pj);
      if (g_.is_field())
        eliminate_field();
      else
        eliminate_integer();
      out.diagonal.push_back(A_(t_, t_));
      ++out.rank;
    }
    out.U = std::move(U_);
    out.V = std::move(V_);
    out.Uinv = std::move(Uinv_);
    return out;
  }

private:
  bool find_pivot(std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    for (std::size_t i = t_; i < m_; ++i)
      for (std::size_t j = t_; j < n_; ++j) {
        const Integer& v = A_(i, j);
        if (v.is_zero()) continue;
        if (!found || Integer::compare_abs(v, A_(pi, pj)) < 0) {
          pi = i;
          pj = j;
          found = true;
          if (v.is_small() && (v.small_value() == 1 || v.small_value() == -1)) return true;
        }
      }
    return found;
  }

  void norm(Integer& v) const {
    if (g_.is_field()) v = g_.normalize(v);
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n_; ++j) std::swap(A_(a, j), A_(b, j));
    if (want_ & kSmithU)
      for (std::size_t j = 0; j < m_; ++j) std::swap(U_(a, j), U_(b, j));
    if (want_ & kSmithUinv)
      for (std::size_t i = 0; i < m_; ++i) std::swap(Uinv_(i, a), Uinv_(i, b));
  }

  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m_; ++i) std::swap(A_(i, a), A_(i, b));
    if (want_ & kSmithV)
      for (std::size_t i = 0; i < n_; ++i) std::swap(V_(i, a), V_(i, b));
  }

  // row[dst] -= q * row[src]
  void row_addmul(std::size_t dst, std::size_t src, const Integer& q) {
    if (q.is_zero()) return;
    for (std::size_t j = t_; j < n_; ++j)
      if (!A_(src, j).is_zero()) {
        A_(dst, j) -= q * A_(src, j);
        norm(A_(dst, j));
      }
    if (want_ & kSmithU)
      for (std::size_t j = 0; j < m_; ++j)
        if (!U_(src, j).is_zero()) {
          U_(dst, j) -= q * U_(src, j);
          norm(U_(dst, j));
        }
    // inverse operation on the right: col[src] += q * col[dst]
    if (want_ & kSmithUinv)
      for (std::size_t i = 0; i < m_; ++i)
        if (!Uinv_(i, dst).is_zero()) {
          Uinv_(i, src) += q * Uinv_(i, dst);
          norm(Uinv_(i, src));
        }
  }

  // col[dst] -= q * col[src]
  void col_addmul(std::size_t dst, std::size_t src, const Integer& q) {
    if (q.is_zero()) return;
    for (std::size_t i = t_; i < m_; ++i)
      if (!A_(i, src).is_zero()) {
        A_(i, dst) -= q * A_(i, src);
        norm(A_(i, dst));
      }
    if (want_ & kSmithV)
      for (std::size_t i = 0; i < n_; ++i)
        if (!V_(i, src).is_zero()) {
          V_(i, dst) -= q * V_(i, src);
          norm(V_(i, dst));
        }
  }

  void row_scale(std::size_t r, const Integer& s, const Integer& s_inv) {
    for (std::size_t j = t_; j < n_; ++j) {
      A_(r, j) *= s;
      norm(A_(r, j));
    }
    if (want_ & kSmithU)
      for (std::size_t j = 0; j < m_; ++j) {
        U_(r, j) *= s;
        norm(U_(r, j));
      }
    if (want_ & kSmithUinv)
      for (std::size_t i = 0; i < m_; ++i) {
        Uinv_(i, r) *= s_inv;
        norm(Uinv_(i, r));
      }
  }

  void eliminate_field() {
    Integer piv = A_(t_, t_);
    if (!piv.is_one()) row_scale(t_, g_.inverse(piv), piv);
    for (std::size_t i = t_ + 1; i < m_; ++i)
      if (!A_(i, t_).is_zero()) row_addmul(i, t_, Integer(A_(i, t_)));
    for (std::size_t j = t_ + 1; j < n_; ++j)
      if (!A_(t_, j).is_zero()) col_addmul(j, t_, Integer(A_(t_, j)));
  }

  void eliminate_integer() {
    for (;;) {
      bool clean = true;
      for (std::size_t i = t_ + 1; i < m_; ++i)
        if (!A_(i, t_).is_zero()) {
          row_addmul(i, t_, floor_div(A_(i, t_), A_(t_, t_)));
          if (!A_(i, t_).is_zero()) clean = false;
        }
      if (clean)
        for (std::size_t j = t_ + 1; j < n_; ++j)
          if (!A_(t_, j).is_zero()) {
            col_addmul(j, t_, floor_div(A_(t_, j), A_(t_, t_)));
            if (!A_(t_, j).is_zero()) clean = false;
          }
      if (!clean) {
        // A remainder smaller than the pivot appeared; move the smallest
        // entry of the pivot row/column into place and repeat.
        std::size_t bi = t_, bj = t_;
        for (std::size_t i = t_ + 1; i < m_; ++i)
          if (!A_(i, t_).is_zero() && Integer::compare_abs(A_(i, t_), A_(bi, bj)) < 0) {
            bi = i;
            bj = t_;
          }
        for (std::size_t j = t_ + 1; j < n_; ++j)
          if (!A_(t_, j).is_zero() && Integer::compare_abs(A_(t_, j), A_(bi, bj)) < 0) {
            bi = t_;
            bj = j;
          }
        swap_rows(t_, bi);
        swap_cols(t_, bj);
        continue;
      }
      // Pivot row and column are clear; enforce divisibility of the rest.
      bool fixed = false;
      for (std::size_t i = t_ + 1; i < m_ && !fixed; ++i)
        for (std::size_t j = t_ + 1; j < n_; ++j)
          if (!divides(A_(t_, t_), A_(i, j))) {
            row_addmul(t_, i, Integer(-1));
            fixed = true;
            break;
          }
      if (!fixed) break;
    }
    if (A_(t_, t_).sign() < 0) row_scale(t_, Integer(-1), Integer(-1));
  }

  const Ground& g_;
  Matrix A_;
  std::size_t m_, n_;
  unsigned want_;
  Matrix U_, V_, Uinv_;
  std::size_t t_ = 0;
};

}  // namespace

SmithForm smith_normal_form(const Matrix& M, const Ground& g, unsigned transforms) {
  return SmithWorker(M, g, transforms).run();
}

bool QuotientStructure::is_finite() const {
  for (const auto& f : factors)
    if (f.is_zero() && !ground.is_field()) return false;
  return true;
}

std::optional<Integer> QuotientStructure::order() const {
  Integer o = 1;
  for (const auto& f : factors) {
    if (f.is_zero()) {
      if (!ground.is_field()) return std::nullopt;
      o *= Integer(ground.p);
    } else {
      o *= f;
    }
  }
  return o;
}

Vector QuotientStructure::reduce(Vector q) const {
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (ground.is_field())
      q[i] = ground.normalize(q[i]);
    else if (!factors[i].is_zero())
      q[i] = floor_mod(q[i], factors[i]);
  }
  return q;
}

Vector QuotientStructure::project(const Vector& x) const {
  if (x.size() != generators) throw std::invalid_argument("project: dimension mismatch");
  return reduce(projection * x);
}

Vector QuotientStructure::lift_vector(const Vector& q) const {
  if (q.size() != factors.size()) throw std::invalid_argument("lift: dimension mismatch");
  return normalized(lift * q, ground);
}

QuotientStructure quotient_structure(std::size_t ngens, const Matrix& relations, const Ground& g) {
  QuotientStructure qs;
  qs.ground = g;
  qs.generators = ngens;
  if (relations.cols() == 0 || relations.rows() == 0) {
    qs.factors.assign(ngens, Integer(0));
    qs.projection = Matrix::identity(ngens);
    qs.lift = Matrix::identity(ngens);
    return qs;
  }
  if (relations.rows() != ngens) throw std::invalid_argument("quotient_structure: relations must have ngens rows");
  SmithForm s = smith_normal_form(relations, g, kSmithU | kSmithUinv);
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < ngens; ++i) {
    if (i < s.rank) {
      if (g.is_unit(s.diagonal[i])) continue;
      qs.factors.push_back(s.diagonal[i]);
    } else {
      qs.factors.push_back(Integer(0));
    }
    kept.push_back(i);
  }
  qs.projection = Matrix(kept.size(), ngens);
  qs.lift = Matrix(ngens, kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    for (std::size_t j = 0; j < ngens; ++j) {
      qs.projection(k, j) = s.U(kept[k], j);
      qs.lift(j, k) = s.Uinv(j, kept[k]);
    }
  }
  return qs;
}

LinearSolver::LinearSolver(const Matrix& A, const Ground& g)
    : ground_(g), rows_(A.rows()), cols_(A.cols()), snf_(smith_normal_form(A, g, kSmithU | kSmithV)) {}

std::optional<Vector> LinearSolver::solve(const Vector& b) const {
  if (b.size() != rows_) throw std::invalid_argument("solve: dimension mismatch");
  Vector y = rows_ ? snf_.U * b : Vector{};
  y = normalized(std::move(y), ground_);
  Vector z(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i < snf_.rank) {
      if (ground_.is_field()) {
        z[i] = y[i];  // diagonal is 1 over a field
      } else {
        if (!divides(snf_.diagonal[i], y[i])) return std::nullopt;
        z[i] = exact_div(y[i], snf_.diagonal[i]);
      }
    } else if (!y[i].is_zero()) {
      return std::nullopt;
    }
  }
  if (cols_ == 0) return Vector{};
  return normalized(snf_.V * z, ground_);
}

std::vector<Vector> LinearSolver::kernel() const {
  std::vector<Vector> out;
  for (std::size_t j = snf_.rank; j < cols_; ++j) out.push_back(snf_.V.column(j));
  return out;
}

std::optional<Vector> solve(const Matrix& A, const Vector& b, const Ground& g) { return LinearSolver(A, g).solve(b); }

std::vector<Vector> kernel_basis(const Matrix& A, const Ground& g) {
  if (A.rows() == 0) {
    std::vector<Vector> out;
    for (std::size_t j = 0; j < A.cols(); ++j) out.push_back(unit_vector(A.cols(), j));
    return out;
  }
  SmithForm s = smith_normal_form(A, g, kSmithV);
  std::vector<Vector> out;
  for (std::size_t j = s.rank; j < A.cols(); ++j) out.push_back(s.V.column(j));
  return out;
}

Matrix span_basis(const Matrix& G, const Ground& g) {
  if (G.cols() == 0) return Matrix(G.rows(), 0);
  SmithForm s = smith_normal_form(G, g, kSmithUinv);
  Matrix B(G.rows(), s.rank);
  for (std::size_t k = 0; k < s.rank; ++k)
    for (std::size_t i = 0; i < G.rows(); ++i) B(i, k) = g.normalize(s.Uinv(i, k) * s.diagonal[k]);
  return B;
}

LatticeReducer::LatticeReducer(const Matrix& generators, const Ground& g) : ground_(g), dim_(generators.rows()) {
  std::vector<Vector> cols;
  for (std::size_t c = 0; c < generators.cols(); ++c) {
    Vector v = normalized(generators.column(c), g);
    if (!is_zero(v)) cols.push_back(std::move(v));
  }
  for (std::size_t r = dim_; r-- > 0 && !cols.empty();) {
    std::size_t best = cols.size();
    for (;;) {
      best = cols.size();
      for (std::size_t k = 0; k < cols.size(); ++k)
        if (!cols[k][r].is_zero() && (best == cols.size() || Integer::compare_abs(cols[k][r], cols[best][r]) < 0)) best = k;
      if (best == cols.size()) break;
      bool clean = true;
      for (std::size_t k = 0; k < cols.size(); ++k) {
        if (k == best || cols[k][r].is_zero()) continue;
        Integer q = g.is_field() ? g.normalize(cols[k][r] * g.inverse(cols[best][r])) : floor_div(cols[k][r], cols[best][r]);
        for (std::size_t i = 0; i <= r; ++i)
          if (!cols[best][i].is_zero()) cols[k][i] = g.normalize(cols[k][i] - q * cols[best][i]);
        if (!cols[k][r].is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (best == cols.size()) continue;
    Vector piv = std::move(cols[best]);
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best));
    if (g.is_field()) {
      Integer inv = g.inverse(piv[r]);
      for (auto& x : piv) x = g.normalize(x * inv);
    } else if (piv[r].sign() < 0) {
      for (auto& x : piv) x = -x;
    }
    pivots_.emplace_back(r, std::move(piv));
    std::erase_if(cols, [](const Vector& v) { return is_zero(v); });
  }
}

Vector LatticeReducer::reduce(Vector x) const {
  x = normalized(std::move(x), ground_);
  for (const auto& [r, h] : pivots_) {
    if (x[r].is_zero()) continue;
    Integer q = ground_.is_field() ? x[r] : floor_div(x[r], h[r]);
    if (q.is_zero()) continue;
    for (std::size_t i = 0; i <= r; ++i)
      if (!h[i].is_zero()) x[i] = ground_.normalize(x[i] - q * h[i]);
  }
  return x;
}

Subquotient::Subquotient(std::size_t ambient, const Matrix& out_map, const Matrix& out_relations,
                         const Matrix& boundaries, const Ground& g)
    : ambient_(ambient), ground_(g) {
  if (out_map.cols() != ambient && out_map.rows() != 0) throw std::invalid_argument("subquotient: out_map width");
  if (boundaries.rows() != ambient && boundaries.cols() != 0) throw std::invalid_argument("subquotient: boundary height");
  // Cycle lattice: projection of ker [out_map | out_relations].
  if (out_map.rows() == 0 || out_map.is_zero()) {
    cycle_basis_ = Matrix::identity(ambient);
  } else {
    Matrix joint = out_relations.cols() ? out_map.hconcat(out_relations) : out_map;
    auto ker = kernel_basis(joint, g);
    Matrix gens(ambient, ker.size());
    for (std::size_t k = 0; k < ker.size(); ++k)
      for (std::size_t i = 0; i < ambient; ++i) gens(i, k) = ker[k][i];
    cycle_basis_ = span_basis(gens, g);
  }
  coords_ = std::make_shared<const LinearSolver>(cycle_basis_, g);
  const std::size_t z = cycle_basis_.cols();
  Matrix rel(z, boundaries.cols());
  for (std::size_t c = 0; c < boundaries.cols(); ++c) {
    auto x = coords_->solve(normalized(boundaries.column(c), g));
    if (!x) throw HypothesisError("subquotient: boundary is not a cycle");
    rel.set_column(c, *x);
  }
  structure_ = quotient_structure(z, rel, g);
}

Vector Subquotient::representative(std::size_t i) const {
  return normalized(cycle_basis_ * structure_.lift_generator(i), ground_);
}

std::optional<Vector> Subquotient::classify(const Vector& x) const {
  if (x.size() != ambient_) throw std::invalid_argument("classify: dimension mismatch");
  if (!coords_) return Vector{};
  auto c = coords_->solve(normalized(x, ground_));
  if (!c) return std::nullopt;
  return structure_.project(*c);
}

}  // namespace dgatk
