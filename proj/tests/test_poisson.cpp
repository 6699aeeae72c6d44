#include <random>

#include "allax/hamiltonians.hpp"
#include "allax/poisson.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace allax;

namespace {

const Complex kI(0.0, 1.0);

VerblunskySequence random_seq(std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return VerblunskySequence::periodic(random_period(p, rng));
}

Observable scaled(const HamiltonianSpec& h, double s) {
  Observable o;
  o.evaluate = [h, s](const VerblunskySequence& q) { return s * h.evaluate(q); };
  o.analytic = [h, s](const VerblunskySequence& q) { return Complex(s) * h.gradient(q); };
  return o;
}

Observable fd_of(const ScalarFunction& f) {
  Observable o;
  o.evaluate = f;
  o.method = GradientMethod::FiniteDifference;
  return o;
}

// Gradient of {f, g} by central differences of the bracket itself.
Observable nested(const Observable& f, const Observable& g) {
  return fd_of([f, g](const VerblunskySequence& q) { return bracket(f, g, q); });
}

}  // namespace

TEST_CASE("coordinate brackets reproduce the AL and rotation fields") {
  const auto s = random_seq(6, 1);
  const auto al = scaled(HamiltonianSpec{HamiltonianKind::ReK, 1}, 2.0);
  const auto logk0 = HamiltonianSpec{HamiltonianKind::LogK0, 0}.observable();
  for (std::size_t j = 0; j < 6; ++j) {
    const auto aj = coordinate_observable(j);
    const auto jj = static_cast<std::int64_t>(j);
    const double r2 = 1.0 - std::norm(s.alphas()[j]);
    const Complex expect = kI * r2 * (alpha_at(s, jj - 1) + alpha_at(s, jj + 1));
    CHECK(std::abs(bracket(aj, al, s) - expect) < 1e-14);
    CHECK(std::abs(bracket(aj, logk0, s) - kI * s.alphas()[j]) < 1e-14);
  }
}

TEST_CASE("bracket antisymmetry and reality") {
  const auto s = random_seq(4, 2);
  const auto f = HamiltonianSpec{HamiltonianKind::ReK, 2}.observable();
  const auto g = HamiltonianSpec{HamiltonianKind::ImK, 1}.observable();
  const auto gfd = HamiltonianSpec{HamiltonianKind::ImK, 1}.observable(GradientMethod::FiniteDifference);
  CHECK(bracket(f, f, s) == 0.0);
  CHECK(bracket(f, g, s) == -bracket(g, f, s));
  CHECK(std::abs(bracket(f, gfd, s) + bracket(gfd, f, s)) < 1e-12);
  const auto x = coordinate_observable(0);
  const auto xbar = coordinate_observable(0, true);
  const Observable re_x = fd_of([](const VerblunskySequence& q) { return Complex(q.alphas()[0].real()); });
  const Observable n1 = fd_of([](const VerblunskySequence& q) { return Complex(std::norm(q.alphas()[1])); });
  CHECK(std::abs(bracket(re_x, f, s).imag()) < 1e-10);
  CHECK(std::abs(bracket(n1, g, s).imag()) < 1e-10);
  // {alpha, conj alpha} = -i rho^2 on one slot.
  CHECK(std::abs(bracket(x, xbar, s) + kI * (1.0 - std::norm(s.alphas()[0]))) < 1e-15);
}

TEST_CASE("Jacobi identity on sample triples") {
  const auto s = random_seq(4, 3);
  const auto rk1 = HamiltonianSpec{HamiltonianKind::ReK, 1}.observable();
  const auto ik1 = HamiltonianSpec{HamiltonianKind::ImK, 1}.observable();
  const auto k0 = HamiltonianSpec{HamiltonianKind::K0, 0}.observable();
  const auto rk2 = HamiltonianSpec{HamiltonianKind::ReK, 2}.observable();
  const Observable re0 = fd_of([](const VerblunskySequence& q) { return Complex(q.alphas()[0].real()); });
  const Observable n1 = fd_of([](const VerblunskySequence& q) { return Complex(std::norm(q.alphas()[1])); });
  const Observable im2 = fd_of([](const VerblunskySequence& q) { return Complex(q.alphas()[2].imag()); });

  auto jacobi = [&](const Observable& f, const Observable& g, const Observable& h) {
    return bracket(f, nested(g, h), s) + bracket(g, nested(h, f), s) +
           bracket(h, nested(f, g), s);
  };
  CHECK(std::abs(jacobi(rk1, ik1, k0)) < 1e-6);
  CHECK(std::abs(jacobi(rk1, k0, rk2)) < 1e-6);
  CHECK(std::abs(jacobi(ik1, k0, rk2)) < 1e-6);
  CHECK(std::abs(jacobi(rk1, ik1, rk2)) < 1e-6);
  // A triple whose pairwise brackets do not vanish.
  CHECK(std::abs(bracket(re0, rk1, s)) > 1e-3);
  CHECK(std::abs(jacobi(re0, n1, rk1)) < 1e-6);
  CHECK(std::abs(jacobi(re0, im2, rk2)) < 1e-6);
}

TEST_CASE("grad_K at first order") {
  const auto s = random_seq(6, 4);
  const auto g = grad_K(1, s);
  for (std::size_t j = 0; j < 6; ++j) {
    const auto jj = static_cast<std::int64_t>(j);
    CHECK(std::abs(g.d_alphabar[j] + alpha_at(s, jj - 1)) < 1e-14);
    CHECK(std::abs(g.d_alpha[j] + std::conj(alpha_at(s, jj + 1))) < 1e-14);
  }
  const auto z = VerblunskySequence::periodic({0.0, 0.0, 0.0, 0.0});
  for (unsigned n = 1; n <= 4; ++n) {
    const auto gz = grad_K(n, z);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(gz.d_alpha[j] == 0.0);
      CHECK(gz.d_alphabar[j] == 0.0);
    }
  }
}

TEST_CASE("grad_K against differences of an independent K") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto s = random_seq(4, 50 + seed);
    for (unsigned n = 1; n <= 3; ++n) {
      const auto ref = fd_gradient(
          [n](const VerblunskySequence& q) { return oracle::k_from_windows(q.alphas(), n); }, s);
      CHECK(max_abs_diff(grad_K(n, s), ref) < 1e-6);
    }
  }
}

TEST_CASE("trace route for the gradient") {
  for (std::size_t p : {2u, 4u}) {
    const auto s = random_seq(p, 60 + p);
    for (unsigned n = 1; n <= 3; ++n) {
      std::size_t d = 1;
      while (d * p < 2 * n + 3 || (d * p) % 2) ++d;
      CHECK(max_abs_diff(grad_K_via_trace(n, s, d), grad_K(n, s)) < 1e-10);
      CHECK(max_abs_diff(grad_K_via_trace(n, s, d + 1), grad_K(n, s)) < 1e-10);
    }
  }
  const auto ex = VerblunskySequence::periodic({0.5, 0.3});
  CHECK(std::abs(grad_K_via_trace(1, ex, 3).d_alphabar[0] + 0.3) < 1e-15);
  CHECK_THROWS_AS(grad_K_via_trace(2, ex, 1), Error);
}

TEST_CASE("slot derivatives of Q_(d) touch 6d entries") {
  const auto s = random_seq(6, 70);
  for (std::size_t d = 1; d <= 3; ++d) {
    const auto obs = floquet_observable(d);
    for (std::size_t j = 0; j < 6; ++j) {
      const auto dq = obs.derivative(s, j, Wirtinger::Alpha);
      std::size_t nz = 0;
      for (const auto& x : dq.data()) nz += x != 0.0;
      CHECK(nz == 6 * d);
      const auto [fa, fb] = fd_matrix_derivative(obs, s, j);
      CHECK(max_abs_diff(fa, dq).value < 1e-8);
      CHECK(max_abs_diff(fb, obs.derivative(s, j, Wirtinger::AlphaBar)).value < 1e-8);
    }
  }
}

TEST_CASE("finite differences") {
  const auto s = random_seq(4, 5);
  const auto g = fd_gradient([](const VerblunskySequence& q) { return q.alphas()[2]; }, s);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(std::abs(g.d_alpha[j] - (j == 2 ? 1.0 : 0.0)) < 1e-9);
    CHECK(std::abs(g.d_alphabar[j]) < 1e-9);
  }
  const auto h = fd_gradient([](const VerblunskySequence& q) { return Complex(std::norm(q.alphas()[1])); }, s);
  CHECK(std::abs(h.d_alpha[1] - std::conj(s.alphas()[1])) < 1e-9);
  CHECK(std::abs(h.d_alphabar[1] - s.alphas()[1]) < 1e-9);

  const double k0 = K0(s);
  const auto an = grad_K0(s);
  const auto fd = fd_gradient([](const VerblunskySequence& q) { return Complex(K0(q)); }, s);
  for (std::size_t j = 0; j < 4; ++j) {
    const Complex a = s.alphas()[j];
    CHECK(std::abs(an.d_alphabar[j] + a * k0 / (1.0 - std::norm(a))) < 1e-15);
  }
  CHECK(max_abs_diff(an, fd) < 1e-6);

  const auto edge = VerblunskySequence::periodic({0.9999995, 0.0});
  CHECK_THROWS_AS(fd_gradient([](const VerblunskySequence& q) { return q.alphas()[0]; }, edge), Error);
}

TEST_CASE("degenerate rho") {
  const auto s = VerblunskySequence::unchecked(SequenceCase::Periodic, {1.0, 0.2});
  CHECK_THROWS_AS(grad_K(2, s), Error);
}

TEST_CASE("matrix brackets") {
  const auto s = random_seq(4, 6);
  const std::size_t d = 2;
  const auto obs = floquet_observable(d);
  const auto q = build_floquet(s, d);

  const auto bk0 = bracket_matrix(obs, grad_K0(s), s);
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      if (q(i, j) == 0.0) CHECK(bk0(i, j) == 0.0);
  CHECK(bk0.max_abs() > 1e-3);

  CHECK(bracket_matrix(obs, WirtingerGradient::zeros(4), s).max_abs() == 0.0);

  const auto bk1 = bracket_matrix(obs, grad_K(1, s), s);
  const auto rhs = commutator(q, kI * oracle::folded_plus(s.alphas(), 1, 8));
  CHECK(max_abs_diff(bk1, rhs).value < 1e-10);
  const auto bk1_fd = bracket_matrix(obs, grad_K(1, s), s, GradientMethod::FiniteDifference);
  CHECK(max_abs_diff(bk1_fd, rhs).value < 1e-5);
}
