#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "spinob/exactfield.hpp"

namespace spinob {

// Dense row-major matrix over an exact field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const Field& field, std::size_t rows, std::size_t cols);

  static Matrix identity(const Field& field, std::size_t n);
  static Matrix diagonal(const Vector& d);
  static Matrix from_rows(const Field& field, const std::vector<Vector>& rows);
  static Matrix from_columns(const Field& field, const std::vector<Vector>& cols);

  const Field& field() const { return *field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  FieldElement& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const FieldElement& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  Vector row(std::size_t r) const;

  Matrix operator*(const Matrix& o) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const FieldElement& s) const;
  Matrix transpose() const;
  bool operator==(const Matrix& o) const;
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_identity() const;
  bool is_zero() const;
  FieldElement determinant() const;
  std::optional<Matrix> inverse() const;
  std::size_t rank() const;
  // Basis of the right kernel, in reduced echelon form with respect to the
  // column order (each basis vector has a 1 at its free column).
  std::vector<Vector> kernel() const;
  // Element-wise conversion into an extension field.
  Matrix embedded(const Field& into) const;

  std::string to_string() const;

 private:
  const Field* field_ = nullptr;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<FieldElement> a_;
};

// Reduced row echelon basis of a row space, built one row at a time.
class EchelonBasis {
 public:
  EchelonBasis(const Field& field, std::size_t cols) : field_(&field), cols_(cols) {}
  // False when row is already in the span.
  bool add(Vector row);
  std::size_t rank() const { return rows_.size(); }
  // Same basis as Matrix::kernel of the rows added so far.
  std::vector<Vector> kernel() const;

 private:
  const Field* field_;
  std::size_t cols_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(Matrix& m);

FieldElement dot(const Vector& a, const Vector& b);
Vector scale(const Vector& v, const FieldElement& s);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
bool is_zero_vector(const Vector& v);
Vector zero_vector(const Field& field, std::size_t n);
Vector unit_vector(const Field& field, std::size_t n, std::size_t i);
std::string vector_to_string(const Vector& v);

}  // namespace spinob
