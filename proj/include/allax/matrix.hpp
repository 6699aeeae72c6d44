#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "allax/error.hpp"

namespace allax {

/// Dense row-major complex matrix. Construction from explicit entries
/// rejects NaN/Inf.
class ComplexMatrix {
 public:
  using value_type = std::complex<double>;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::vector<value_type> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
  }
  /// Row-major nested initializer, mostly for tests.
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<value_type>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  value_type& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const value_type& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  const std::vector<value_type>& data() const noexcept { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(value_type s);

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  value_type trace() const;
  double max_abs() const;

  /// Throws NonFiniteEntry at the first NaN/Inf.
  void check_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, std::complex<double> s);
ComplexMatrix operator*(std::complex<double> s, ComplexMatrix a);

/// A^n by repeated squaring; A^0 = I.
ComplexMatrix power(const ComplexMatrix& a, unsigned n);

/// Tr(AB) without forming the product.
std::complex<double> trace_of_product(const ComplexMatrix& a,
                                      const ComplexMatrix& b);

/// AB - BA.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |a_ij - b_ij| and the location where it is attained.
struct MaxDiff {
  double value = 0.0;
  std::size_t row = 0;
  std::size_t col = 0;
};
MaxDiff max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// max |(A A^* - I)_ij|.
double unitarity_defect(const ComplexMatrix& a);

}  // namespace allax
