#include <cmath>
#include <numbers>
#include <random>

#include "allax/cmv.hpp"
#include "allax/hamiltonians.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace allax;

namespace {

VerblunskySequence random_seq(std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return VerblunskySequence::periodic(random_period(p, rng));
}

// Half-line diagonal sum from an extended matrix whose period ends in -1,
// which splits the line into decoupled half-line blocks.
Complex half_line_oracle(const CoeffVector& head, unsigned n, std::size_t window) {
  CoeffVector period(head);
  period.resize(window + 8 * n + 8, 0.0);
  if (period.size() % 2) period.push_back(0.0);
  period.push_back(0.0);
  period.push_back(-1.0);
  Complex s = 0.0;
  for (std::size_t k = 0; k <= window; ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    s += oracle::e_power_entry(period, n, kk, kk);
  }
  return s / static_cast<double>(n);
}

}  // namespace

TEST_CASE("K_n basic values") {
  const auto z = VerblunskySequence::periodic({0.0, 0.0, 0.0, 0.0});
  for (unsigned n = 1; n <= 4; ++n) CHECK(K(n, z) == 0.0);
  CHECK(std::abs(K(1, VerblunskySequence::periodic({0.5, 0.3})) + 0.30) < 1e-15);
  CHECK(minimal_d(2, 1) == 2);
  CHECK(minimal_d(4, 1) == 1);
  CHECK(minimal_d(4, 3) == 2);
}

TEST_CASE("K_n against window oracle and d independence") {
  for (std::size_t p : {2u, 4u, 6u}) {
    const auto s = random_seq(p, 10 + p);
    for (unsigned n = 1; n <= 3; ++n) {
      const Complex ref = oracle::k_from_windows(s.alphas(), n);
      CHECK(std::abs(K(n, s) - ref) < 1e-13);
      CHECK(std::abs(K_from_diagonal(n, s) - ref) < 1e-13);
      const std::size_t d = minimal_d(p, n);
      CHECK(std::abs(K_with_d(n, s, d) - K_with_d(n, s, d + 2)) < 1e-12);
    }
  }
}

TEST_CASE("K0") {
  CHECK(K0(VerblunskySequence::periodic({0.6, 0.8})) == doctest::Approx(0.2304).epsilon(1e-14));
  CHECK(K0(VerblunskySequence::periodic({0.0, 0.0})) == 1.0);
  const auto f = VerblunskySequence::finite({0.6, 0.0, -1.0});
  CHECK(K0(f) == doctest::Approx(0.64).epsilon(1e-14));
  CHECK(K0_finite_full(f) == 0.0);
}

TEST_CASE("finite Hamiltonians") {
  CHECK(std::abs(K_finite(1, VerblunskySequence::finite({0.6, -1.0})) - 1.2) < 1e-15);
  CHECK(K_finite(1, VerblunskySequence::finite({0.0, -1.0})) == 0.0);

  std::mt19937_64 rng(8);
  for (std::size_t k : {4u, 6u}) {
    const auto a = oracle::random_finite(k, rng);
    const auto fin = VerblunskySequence::finite(a);
    const auto per = VerblunskySequence::unchecked(SequenceCase::Periodic, a);
    for (unsigned n = 1; n <= 3; ++n) {
      for (std::size_t d = 1; d <= 3; ++d)
        CHECK(std::abs(trace_power(n, per, d) / static_cast<double>(d * n) - K_finite(n, fin)) < 1e-13);
      const auto fd = fd_gradient([n](const VerblunskySequence& q) { return K_finite(n, q); }, fin);
      CHECK(max_abs_diff(grad_K_finite(n, fin), fd) < 1e-6);
    }
  }
}

TEST_CASE("half-line Hamiltonians") {
  const auto e = VerblunskySequence::infinite({0.5, 0.0, 0.0, 0.0});
  CHECK(std::abs(K_infinite(1, e, default_infinite_window(1, e)).value - 0.5) < 1e-15);
  const auto z = VerblunskySequence::infinite({0.0, 0.0, 0.0});
  CHECK(K_infinite(2, z, default_infinite_window(2, z)).value == 0.0);

  std::mt19937_64 rng(9);
  const auto s = VerblunskySequence::infinite(random_period(7, rng));
  for (unsigned n = 1; n <= 3; ++n) {
    const std::size_t w = default_infinite_window(n, s);
    const auto v = K_infinite(n, s, w);
    CHECK(v.tail_bound == 0.0);
    CHECK(v.value == K_infinite(n, s, 2 * w).value);
    CHECK(std::abs(v.value - K_infinite(n, s, w + 6).value) < 1e-14);
    CHECK(std::abs(v.value - half_line_oracle(s.alphas(), n, w)) < 1e-13);
    const auto fd = fd_gradient(
        [n, w](const VerblunskySequence& q) { return K_infinite(n, q, w).value; }, s);
    CHECK(max_abs_diff(grad_K_infinite(n, s, w), fd) < 1e-6);
  }
  CHECK_THROWS_AS(K_infinite(2, s, 4), Error);
}

TEST_CASE("characteristic polynomial") {
  const auto i2 = char_poly_coeffs(ComplexMatrix::identity(2));
  CHECK(i2 == std::vector<Complex>{1.0, -2.0, 1.0});
  const auto d23 = char_poly_coeffs(ComplexMatrix::from_rows({{2.0, 0.0}, {0.0, 3.0}}));
  CHECK(std::abs(d23[1] + 5.0) < 1e-14);
  CHECK(std::abs(d23[2] - 6.0) < 1e-14);

  std::mt19937_64 rng(10);
  const auto u = oracle::random_unitary(8, rng);
  const auto cu = char_poly_coeffs(u);
  CHECK(std::abs(std::abs(cu.back()) - 1.0) < 1e-10);

  const auto m = oracle::random_unitary(6, rng);
  const auto cm = char_poly_coeffs(m);
  for (const Complex z : {Complex(0.3, 0.7), Complex(-1.2, 0.1), Complex(0.0, 2.0)}) {
    Complex poly = 0.0;
    for (const auto& c : cm) poly = poly * z + c;
    const auto shifted = z * ComplexMatrix::identity(6) - m;
    CHECK(std::abs(poly - oracle::determinant(shifted)) < 1e-10);
  }
  CHECK_THROWS_AS(char_poly_coeffs(ComplexMatrix::identity(257)), Error);
}

TEST_CASE("discriminant") {
  const auto z = VerblunskySequence::periodic({0.0, 0.0});
  CHECK(std::abs(discriminant(z, 1.0) - 2.0) < 1e-15);
  CHECK(std::abs(discriminant(z, Complex(0.0, 1.0))) < 1e-15);
  CHECK_THROWS_AS(discriminant(z, 0.0), Error);

  const auto s = VerblunskySequence::periodic({0.5, 0.3});
  const double expect = 2.0 / (std::sqrt(0.75) * std::sqrt(0.91)) * 1.15;
  CHECK(std::abs(discriminant(s, 1.0) - expect) < 1e-10);
  for (double th = 0.0; th < 6.28; th += 0.3) {
    CHECK(std::abs(discriminant(s, std::polar(1.0, th)) - oracle::delta_two(0.5, 0.3, th)) < 1e-10);
    CHECK(std::abs(discriminant_period_two(0.5, 0.3, th) - oracle::delta_two(0.5, 0.3, th)) < 1e-14);
  }

  // Real on the circle, with coefficients mirrored under conjugation.
  const auto r = random_seq(6, 11);
  const auto dp = discriminant_poly(r);
  REQUIRE(dp.c.size() == 7);
  for (std::size_t j = 0; j <= 6; ++j)
    CHECK(std::abs(dp.c[6 - j] - std::conj(dp.c[j])) < 1e-12);
  for (double th : {0.1, 1.3, 2.9})
    CHECK(std::abs(discriminant(r, std::polar(1.0, th)).imag()) < 1e-10);
}

TEST_CASE("invariant vector") {
  const auto v0 = invariant_vector(VerblunskySequence::periodic({0.0, 0.0}));
  REQUIRE(v0.size() == 2);
  CHECK(std::abs(v0[0]) < 1e-15);
  CHECK(v0[1] == 1.0);
  for (std::size_t p : {2u, 4u, 6u}) CHECK(invariant_vector(random_seq(p, p)).size() == p);
}

TEST_CASE("low traces of Q_(1) and the half-period branch") {
  for (std::size_t p : {4u, 6u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto s = random_seq(p, 300 + seed);
      const auto q = build_floquet(s, 1);
      for (unsigned n = 1; n < p / 2; ++n)
        CHECK(std::abs(K(n, s) - power(q, n).trace() / static_cast<double>(n)) < 1e-10);
      const unsigned h = static_cast<unsigned>(p / 2);
      const Complex lhs = 2.0 / static_cast<double>(p) * power(q, h).trace();
      CHECK(std::abs(lhs - (K(h, s) + 2.0 * std::sqrt(K0(s)))) < 1e-10);
    }
  }
  const auto z = VerblunskySequence::periodic({0.0, 0.0, 0.0, 0.0});
  CHECK(0.5 * power(build_floquet(z, 1), 2).trace() == Complex(2.0));
  CHECK(K(2, z) == 0.0);
}

TEST_CASE("Hamiltonians Poisson commute") {
  const auto s = random_seq(4, 12);
  for (unsigned n = 1; n <= 3; ++n) {
    const auto gn = grad_K(n, s);
    CHECK(std::abs(bracket(grad_K0(s), gn, s)) < 1e-8);
    for (unsigned m = 1; m <= 3; ++m) {
      const auto gm = grad_K(m, s);
      CHECK(std::abs(bracket(gn, gm, s)) < 1e-8);
      CHECK(std::abs(bracket(gn, conjugate_gradient(gm), s)) < 1e-8);
    }
  }
  // A non-conserved observable does not commute.
  CHECK(std::abs(bracket(coordinate_observable(0).gradient(s), grad_K(1, s), s)) > 1e-3);

  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> th(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < 5; ++k) {
    const Complex z = std::polar(1.0, th(rng));
    const Complex w = std::polar(1.0, th(rng));
    const auto gz = fd_gradient([z](const VerblunskySequence& q) { return discriminant(q, z); }, s);
    const auto gw = fd_gradient([w](const VerblunskySequence& q) { return discriminant(q, w); }, s);
    CHECK(std::abs(bracket(gz, gw, s)) < 1e-6);
  }
}

TEST_CASE("Hamiltonian specs") {
  for (const char* name : {"AL", "K:2", "Kbar:3", "ReK:1", "ImK:2", "K0", "logK0"}) {
    const auto h = HamiltonianSpec::parse(name);
    CHECK(HamiltonianSpec::parse(h.name()).kind == h.kind);
    CHECK(HamiltonianSpec::parse(h.name()).n == h.n);
  }
  CHECK_THROWS_AS(HamiltonianSpec::parse("K:x"), Error);
  CHECK_THROWS_AS(HamiltonianSpec::parse("nope"), Error);

  const auto s = random_seq(4, 14);
  const Complex al = HamiltonianSpec::parse("AL").evaluate(s);
  CHECK(std::abs(al - (2.0 * K(1, s).real() - 2.0 * std::log(K0(s)))) < 1e-14);
  CHECK(HamiltonianSpec::parse("Kbar:2").evaluate(s) == std::conj(K(2, s)));
  for (const char* name : {"AL", "K:2", "Kbar:3", "ReK:1", "ImK:2", "K0", "logK0"}) {
    const auto h = HamiltonianSpec::parse(name);
    CHECK(max_abs_diff(h.gradient(s), h.gradient(s, GradientMethod::FiniteDifference)) < 1e-6);
  }
}
