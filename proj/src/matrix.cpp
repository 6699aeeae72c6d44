#include "allax/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace allax {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" +
                    std::to_string(b.cols()));
}

void require_square(const ComplexMatrix& a) {
  if (!a.is_square())
    throw Error(ErrorCode::NonSquare, std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols,
                             std::vector<value_type> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch,
                "entry count " + std::to_string(data_.size()) +
                    " does not match shape");
  check_finite();
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<value_type>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<value_type> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c)
      throw Error(ErrorCode::DimensionMismatch, "ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_shape(*this, rhs);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(value_type s) {
  for (auto& x : data_) x *= s;
  return *this;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(*this);
  for (auto& x : out.data_) x = std::conj(x);
  return out;
}

ComplexMatrix::value_type ComplexMatrix::trace() const {
  require_square(*this);
  value_type t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& x : data_) m = std::max(m, std::abs(x));
  return m;
}

void ComplexMatrix::check_finite() const {
  for (std::size_t k = 0; k < data_.size(); ++k) {
    if (!std::isfinite(data_[k].real()) || !std::isfinite(data_[k].imag()))
      throw Error(ErrorCode::NonFiniteEntry,
                  "entry (" + std::to_string(k / cols_) + ", " +
                      std::to_string(k % cols_) + ")",
                  static_cast<std::int64_t>(k));
  }
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
  a += b;
  return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
  a -= b;
  return a;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(ComplexMatrix a, std::complex<double> s) {
  a *= s;
  return a;
}

ComplexMatrix operator*(std::complex<double> s, ComplexMatrix a) {
  a *= s;
  return a;
}

ComplexMatrix power(const ComplexMatrix& a, unsigned n) {
  require_square(a);
  ComplexMatrix result = ComplexMatrix::identity(a.rows());
  ComplexMatrix base = a;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1u;
    if (n > 0) base = base * base;
  }
  return result;
}

std::complex<double> trace_of_product(const ComplexMatrix& a,
                                      const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "trace of a non-square product");
  std::complex<double> t = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t += a(i, j) * b(j, i);
  return t;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

MaxDiff max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b);
  MaxDiff d;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double v = std::abs(a(i, j) - b(i, j));
      if (v > d.value) d = {v, i, j};
    }
  }
  return d;
}

double unitarity_defect(const ComplexMatrix& a) {
  require_square(a);
  return max_abs_diff(a * a.adjoint(), ComplexMatrix::identity(a.rows())).value;
}

}  // namespace allax
