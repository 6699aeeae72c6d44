#include <random>

#include "allax/matrix.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace allax;

TEST_CASE("arithmetic and power") {
  const auto a = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const auto b = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const auto ab = a * b;
  CHECK(ab(0, 0) == Complex(2.0));
  CHECK(ab(1, 1) == Complex(3.0));
  CHECK(power(a, 0).data() == ComplexMatrix::identity(2).data());
  CHECK(max_abs_diff(power(a, 3), a * a * a).value < 1e-12);
  CHECK(trace_of_product(a, b) == ab.trace());
  CHECK(commutator(a, a).max_abs() == 0.0);
  CHECK((a - a).max_abs() == 0.0);
  CHECK((2.0 * a)(1, 0) == Complex(6.0));
  CHECK(a.adjoint()(0, 1) == Complex(3.0));
}

TEST_CASE("shape errors") {
  const ComplexMatrix a(2, 3);
  CHECK_THROWS_AS(a.trace(), Error);
  CHECK_THROWS_AS(a * a, Error);
  CHECK_THROWS_AS(ComplexMatrix(2, 2) + ComplexMatrix(3, 3), Error);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(std::nan(""), 0.0)}), Error);
}

TEST_CASE("random unitaries have zero defect") {
  std::mt19937_64 rng(5);
  const auto u = oracle::random_unitary(8, rng);
  CHECK(unitarity_defect(u) < 1e-12);
  CHECK(std::abs(std::abs(oracle::determinant(u)) - 1.0) < 1e-12);
}
