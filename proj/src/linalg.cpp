#include "spinob/linalg.hpp"

#include <sstream>

namespace spinob {

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), a_(rows * cols, field.zero()) {}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  ensure(!d.empty(), ErrorCode::DimensionMismatch, "empty diagonal");
  Matrix m(d.front().field(), d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_rows(const Field& field, const std::vector<Vector>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ensure(rows[i].size() == c, ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::from_columns(const Field& field, const std::vector<Vector>& cols) {
  return from_rows(field, cols).transpose();
}

Vector Matrix::column(std::size_t c) const {
  Vector v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

Vector Matrix::row(std::size_t r) const { return Vector(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_); }

Matrix Matrix::operator*(const Matrix& o) const {
  ensure(cols_ == o.rows_, ErrorCode::DimensionMismatch, "matrix product shapes");
  Matrix m(*field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const FieldElement& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) {
        const FieldElement& y = o(k, j);
        if (!y.is_zero()) m(i, j) += x * y;
      }
    }
  return m;
}

Vector Matrix::operator*(const Vector& v) const {
  ensure(cols_ == v.size(), ErrorCode::DimensionMismatch, "matrix-vector shapes");
  Vector out(rows_, field_->zero());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (!v[k].is_zero() && !(*this)(i, k).is_zero()) out[i] += (*this)(i, k) * v[k];
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  ensure(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix sum shapes");
  Matrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] += o.a_[i];
  return m;
}

Matrix Matrix::operator-(const Matrix& o) const {
  ensure(rows_ == o.rows_ && cols_ == o.cols_, ErrorCode::DimensionMismatch, "matrix difference shapes");
  Matrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

Matrix Matrix::scaled(const FieldElement& s) const {
  Matrix m = *this;
  for (auto& x : m.a_) x *= s;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(*field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

bool Matrix::operator==(const Matrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((i == j) ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
  return true;
}

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

namespace {

// Bit size of an element of Q or a quadratic tower over Q; 0 in positive characteristic.
std::size_t height(const FieldElement& x) {
  const Field& f = x.field();
  if (f.kind() == Field::Kind::Rationals)
    return mpz_sizeinbase(x.rational().get_num_mpz_t(), 2) + mpz_sizeinbase(x.rational().get_den_mpz_t(), 2);
  if (f.is_quadratic_kind()) return height(x.re()) + height(x.im());
  return 0;
}

}  // namespace

std::vector<std::size_t> row_reduce(Matrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  bool exact_zero = m.field().characteristic() == 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = m.rows(), best = 0;
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      std::size_t h = exact_zero ? height(m(i, c)) : 0;
      if (piv == m.rows() || h < best) {
        piv = i;
        best = h;
      }
      if (!exact_zero) break;
    }
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    FieldElement inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      FieldElement f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

FieldElement Matrix::determinant() const {
  ensure(rows_ == cols_, ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  Matrix m = *this;
  FieldElement det = field_->one();
  for (std::size_t c = 0; c < cols_; ++c) {
    std::size_t piv = c;
    while (piv < rows_ && m(piv, c).is_zero()) ++piv;
    if (piv == rows_) return field_->zero();
    if (piv != c) {
      for (std::size_t j = 0; j < cols_; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    FieldElement inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < rows_; ++i) {
      if (m(i, c).is_zero()) continue;
      FieldElement f = m(i, c) * inv;
      for (std::size_t j = c; j < cols_; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::optional<Matrix> Matrix::inverse() const {
  ensure(rows_ == cols_, ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  std::size_t n = rows_;
  Matrix aug(*field_, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = field_->one();
  }
  auto piv = row_reduce(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix inv(*field_, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return row_reduce(m).size();
}

std::vector<Vector> Matrix::kernel() const {
  Matrix m = *this;
  auto piv = row_reduce(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : piv) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols_, field_->zero());
    v[free] = field_->one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool EchelonBasis::add(Vector row) {
  ensure(row.size() == cols_, ErrorCode::DimensionMismatch, "row length does not match the basis");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    FieldElement f = row[pivots_[r]];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!rows_[r][j].is_zero()) row[j] -= f * rows_[r][j];
  }
  std::size_t c = 0;
  while (c < cols_ && row[c].is_zero()) ++c;
  if (c == cols_) return false;
  FieldElement inv = row[c].inverse();
  for (auto& x : row)
    if (!x.is_zero()) x *= inv;
  for (auto& other : rows_) {
    FieldElement f = other[c];
    if (f.is_zero()) continue;
    for (std::size_t j = 0; j < cols_; ++j)
      if (!row[j].is_zero()) other[j] -= f * row[j];
  }
  rows_.push_back(std::move(row));
  pivots_.push_back(c);
  return true;
}

std::vector<Vector> EchelonBasis::kernel() const {
  std::vector<bool> is_pivot(cols_, false);
  for (auto c : pivots_) is_pivot[c] = true;
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    Vector v(cols_, field_->zero());
    v[free] = field_->one();
    for (std::size_t r = 0; r < rows_.size(); ++r) v[pivots_[r]] = -rows_[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

Matrix Matrix::embedded(const Field& into) const {
  Matrix m(into, rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = embed(a_[i], into);
  return m;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << (*this)(i, j).to_string();
  }
  os << "]";
  return os.str();
}

FieldElement dot(const Vector& a, const Vector& b) {
  ensure(a.size() == b.size() && !a.empty(), ErrorCode::DimensionMismatch, "dot product shapes");
  FieldElement s = a[0] * b[0];
  for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vector scale(const Vector& v, const FieldElement& s) {
  Vector out = v;
  for (auto& x : out) x *= s;
  return out;
}

Vector add(const Vector& a, const Vector& b) {
  ensure(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector sum shapes");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector sub(const Vector& a, const Vector& b) {
  ensure(a.size() == b.size(), ErrorCode::DimensionMismatch, "vector difference shapes");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

bool is_zero_vector(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vector zero_vector(const Field& field, std::size_t n) { return Vector(n, field.zero()); }

Vector unit_vector(const Field& field, std::size_t n, std::size_t i) {
  Vector v(n, field.zero());
  v[i] = field.one();
  return v;
}

std::string vector_to_string(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + ")";
}

}  // namespace spinob
