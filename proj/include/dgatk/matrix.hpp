#pragma once

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "dgatk/ground.hpp"
#include "dgatk/integer.hpp"

namespace dgatk {

using Vector = std::vector<Integer>;

/// Sparse vector: (index, coefficient) pairs, sorted by index, no zeros.
using SparseVector = std::vector<std::pair<std::size_t, Integer>>;

/// Dense row-major matrix of exact integers.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;
  void set_column(std::size_t c, const Vector& v);
  void append_column(const Vector& v);

  Matrix transpose() const;
  bool is_zero() const;

  /// [this | other]; row counts must agree.
  Matrix hconcat(const Matrix& other) const;
  /// [this ; other]; column counts must agree.
  Matrix vconcat(const Matrix& other) const;
  Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

  void normalize(const Ground& g);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
std::ostream& operator<<(std::ostream& os, const Matrix& m);

Vector normalized(Vector v, const Ground& g);
bool is_zero(const Vector& v);
Vector add(const Vector& a, const Vector& b);
Vector scale(const Vector& a, const Integer& s);
Vector unit_vector(std::size_t n, std::size_t i);

SparseVector to_sparse(const Vector& v);
Vector to_dense(const SparseVector& v, std::size_t n);
/// acc += s * v
void axpy(Vector& acc, const Integer& s, const SparseVector& v);

}  // namespace dgatk
