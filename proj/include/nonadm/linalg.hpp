#pragma once

// Dense row-major matrices over a GF(p^k) descriptor, and subspaces kept in
// reduced row-echelon form.

#include <cstddef>
#include <vector>

#include "nonadm/gf.hpp"

namespace nonadm::linalg {

using gf::Code;
using gf::FieldPtr;
using Vec = std::vector<Code>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(FieldPtr field, std::size_t rows, std::size_t cols);
  static Matrix identity(const FieldPtr& field, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const FieldPtr& field() const { return field_; }
  Code at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Code v) { data_[i * cols_ + j] = v; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  bool operator==(const Matrix& o) const;
  Matrix transpose() const;
  /// M v for a column vector v.
  Vec apply(const Vec& v) const;

  Matrix rref() const;
  std::size_t rank() const;
  /// Basis of {v : M v = 0}.
  std::vector<Vec> nullspace() const;

 private:
  void check_same(const Matrix& o) const;

  FieldPtr field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Code> data_;
};

Vec add(const FieldPtr& F, const Vec& a, const Vec& b);
Vec scale(const FieldPtr& F, Code s, const Vec& a);
/// a + s b.
Vec axpy(const FieldPtr& F, const Vec& a, Code s, const Vec& b);
bool is_zero(const Vec& v);

/// Subspace of F^n with a reduced echelon basis; coordinates of a member are
/// its entries at the pivot columns.
class Subspace {
 public:
  Subspace() = default;
  Subspace(FieldPtr field, std::size_t ambient);

  /// True if `v` enlarged the subspace.
  bool add(const Vec& v);
  bool contains(const Vec& v) const;
  Vec reduce(const Vec& v) const;
  Vec coordinates(const Vec& v) const;
  Vec combine(const Vec& coords) const;

  std::size_t dim() const { return basis_.size(); }
  std::size_t ambient() const { return ambient_; }
  const FieldPtr& field() const { return field_; }
  const std::vector<Vec>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  bool operator==(const Subspace& o) const { return basis_ == o.basis_; }
  bool contains(const Subspace& o) const;

 private:
  FieldPtr field_;
  std::size_t ambient_ = 0;
  std::vector<Vec> basis_;  // sorted by pivot
  std::vector<std::size_t> pivots_;
};

}  // namespace nonadm::linalg
