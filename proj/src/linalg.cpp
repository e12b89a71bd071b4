#include "nonadm/linalg.hpp"

#include <algorithm>

#include "nonadm/error.hpp"

namespace nonadm::linalg {

Matrix::Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix Matrix::identity(const FieldPtr& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

void Matrix::check_same(const Matrix& o) const {
  if (field_ != o.field_) throw Error(Errc::MixedFields, "matrices over different fields");
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_same(o);
  if (cols_ != o.rows_) throw Error(Errc::PreconditionViolation, "matrix shapes do not compose");
  Matrix out(field_, rows_, o.cols_);
  const auto& F = *field_;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Code a = at(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const Code b = o.at(k, j);
        if (b) out.data_[i * o.cols_ + j] = F.add(out.data_[i * o.cols_ + j], F.mul(a, b));
      }
    }
  }
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_same(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::PreconditionViolation, "shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->add(data_[i], o.data_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_same(o);
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(Errc::PreconditionViolation, "shape mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = field_->sub(data_[i], o.data_[i]);
  return out;
}

bool Matrix::operator==(const Matrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

Matrix Matrix::transpose() const {
  Matrix out(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out.set(j, i, at(i, j));
  return out;
}

Vec Matrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw Error(Errc::PreconditionViolation, "vector length mismatch");
  Vec out(rows_, 0);
  const auto& F = *field_;
  for (std::size_t i = 0; i < rows_; ++i) {
    Code s = 0;
    for (std::size_t j = 0; j < cols_; ++j)
      if (v[j] && at(i, j)) s = F.add(s, F.mul(at(i, j), v[j]));
    out[i] = s;
  }
  return out;
}

Matrix Matrix::rref() const {
  Matrix m = *this;
  const auto& F = *field_;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
    std::size_t p = r;
    while (p < rows_ && m.at(p, c) == 0) ++p;
    if (p == rows_) continue;
    for (std::size_t j = 0; j < cols_; ++j) std::swap(m.data_[r * cols_ + j], m.data_[p * cols_ + j]);
    const Code inv = F.inv(m.at(r, c));
    for (std::size_t j = 0; j < cols_; ++j) m.set(r, j, F.mul(inv, m.at(r, j)));
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      const Code f = F.neg(m.at(i, c));
      for (std::size_t j = 0; j < cols_; ++j) m.set(i, j, F.add(m.at(i, j), F.mul(f, m.at(r, j))));
    }
    ++r;
  }
  return m;
}

std::size_t Matrix::rank() const {
  const Matrix m = rref();
  std::size_t r = 0;
  for (std::size_t i = 0; i < rows_; ++i) {
    bool nz = false;
    for (std::size_t j = 0; j < cols_ && !nz; ++j) nz = m.at(i, j) != 0;
    r += nz;
  }
  return r;
}

std::vector<Vec> Matrix::nullspace() const {
  const Matrix m = rref();
  const auto& F = *field_;
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (m.at(i, j)) {
        pivot_col.push_back(j);
        is_pivot[j] = true;
        break;
      }
    }
  }
  std::vector<Vec> out;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols_, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = F.neg(m.at(i, free));
    out.push_back(std::move(v));
  }
  return out;
}

Vec add(const FieldPtr& F, const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F->add(a[i], b[i]);
  return out;
}

Vec scale(const FieldPtr& F, Code s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = F->mul(s, a[i]);
  return out;
}

Vec axpy(const FieldPtr& F, const Vec& a, Code s, const Vec& b) {
  Vec out = a;
  if (s == 0) return out;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i]) out[i] = F->add(out[i], F->mul(s, b[i]));
  return out;
}

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](Code c) { return c == 0; });
}

Subspace::Subspace(FieldPtr field, std::size_t ambient) : field_(std::move(field)), ambient_(ambient) {}

Vec Subspace::reduce(const Vec& v) const {
  if (v.size() != ambient_) throw Error(Errc::PreconditionViolation, "vector length mismatch");
  Vec r = v;
  for (std::size_t k = 0; k < basis_.size(); ++k) {
    const Code c = r[pivots_[k]];
    if (c) r = axpy(field_, r, field_->neg(c), basis_[k]);
  }
  return r;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool Subspace::contains(const Subspace& o) const {
  return std::all_of(o.basis_.begin(), o.basis_.end(), [&](const Vec& v) { return contains(v); });
}

bool Subspace::add(const Vec& v) {
  Vec r = reduce(v);
  std::size_t p = 0;
  while (p < r.size() && r[p] == 0) ++p;
  if (p == r.size()) return false;
  r = scale(field_, field_->inv(r[p]), r);
  for (auto& b : basis_)
    if (b[p]) b = axpy(field_, b, field_->neg(b[p]), r);
  const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
  pivots_.insert(pivots_.begin() + pos, p);
  basis_.insert(basis_.begin() + pos, std::move(r));
  return true;
}

Vec Subspace::coordinates(const Vec& v) const {
  if (!contains(v)) throw Error(Errc::PreconditionViolation, "vector outside the subspace");
  Vec c(basis_.size());
  for (std::size_t k = 0; k < basis_.size(); ++k) c[k] = v[pivots_[k]];
  return c;
}

Vec Subspace::combine(const Vec& coords) const {
  Vec out(ambient_, 0);
  for (std::size_t k = 0; k < basis_.size(); ++k) out = axpy(field_, out, coords[k], basis_[k]);
  return out;
}

}  // namespace nonadm::linalg
