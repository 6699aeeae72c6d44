#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "allax/flows.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace allax;

namespace {

const Complex kI(0.0, 1.0);

VerblunskySequence random_seq(std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return VerblunskySequence::periodic(random_period(p, rng, 0.7));
}

FlowConfig config(const char* h, double t_end, double dt) {
  FlowConfig c;
  c.hamiltonian = HamiltonianSpec::parse(h);
  c.t_end = t_end;
  c.dt = dt;
  return c;
}

}  // namespace

TEST_CASE("vector fields") {
  const auto s = random_seq(6, 1);
  const auto al = vector_field(HamiltonianSpec::parse("AL"), s);
  const auto rot = vector_field(HamiltonianSpec::parse("logK0"), s);
  const auto k0 = vector_field(HamiltonianSpec::parse("K0"), s);
  const double big_k0 = K0(s);
  for (std::size_t j = 0; j < 6; ++j) {
    const auto jj = static_cast<std::int64_t>(j);
    const Complex a = s.alphas()[j];
    const double r2 = 1.0 - std::norm(a);
    const Complex expect = kI * r2 * (alpha_at(s, jj - 1) + alpha_at(s, jj + 1)) - 2.0 * kI * a;
    CHECK(std::abs(al[j] - expect) < 1e-14);
    CHECK(std::abs(rot[j] - kI * a) < 1e-15);
    CHECK(std::abs(k0[j] - kI * big_k0 * a) < 1e-15);
  }
  const auto z = VerblunskySequence::periodic({0.0, 0.0, 0.0, 0.0});
  for (unsigned n = 1; n <= 3; ++n)
    for (const auto& v : vector_field(HamiltonianSpec{HamiltonianKind::K, n}, z)) CHECK(v == 0.0);
}

TEST_CASE("Geronimus circle") {
  const auto s = VerblunskySequence::periodic({0.4, 0.4});
  auto c = config("AL", 10.0, 1e-3);
  c.monitor_every = 100;
  const auto traj = integrate(c, s);
  double worst_mod = 0.0, worst_closed = 0.0;
  for (const auto& rec : traj) {
    // Equal entries rotate uniformly: alpha' = -2 i |alpha|^2 alpha.
    const Complex closed = std::polar(0.4, -2.0 * 0.16 * rec.t);
    for (const auto& a : rec.alphas) {
      worst_mod = std::max(worst_mod, std::abs(std::abs(a) - 0.4));
      worst_closed = std::max(worst_closed, std::abs(a - closed));
    }
  }
  CHECK(worst_mod < 1e-8);
  CHECK(worst_closed < 1e-8);
  CHECK(drift_report(traj).at("maxmod") < 1e-8);
}

TEST_CASE("log K0 flow is a full rotation after 2 pi") {
  const auto s = random_seq(4, 2);
  auto c = config("logK0", 2.0 * std::numbers::pi, 1e-3);
  c.monitor_every = 1000;
  const auto traj = integrate(c, s);
  for (std::size_t j = 0; j < 4; ++j)
    CHECK(std::abs(traj.back().alphas[j] - s.alphas()[j]) < 1e-8);
}

TEST_CASE("isospectral flows conserve invariants") {
  const auto s = random_seq(4, 3);
  const std::vector<std::string> conserved = {"K0", "ReK", "ImK", "cpoly", "inv"};
  for (const char* h : {"AL", "ReK:2", "ImK:1", "K0", "ImK:3", "logK0"}) {
    auto c = config(h, 1.0, 1e-3);
    c.monitor_every = 50;
    const auto drift = drift_report(integrate(c, s));
    CHECK_MESSAGE(max_drift(drift, conserved) < 1e-9, h);
    CHECK(drift.at("unitarity") < 1e-12);
  }
  // Coordinates themselves move.
  auto c = config("AL", 1.0, 1e-2);
  const auto traj = integrate(c, s);
  CHECK(std::abs(traj.back().alphas[0] - s.alphas()[0]) > 1e-3);
}

TEST_CASE("finite and half-line flows") {
  const auto f = VerblunskySequence::finite({0.3, Complex(0.1, -0.2), 0.4, -1.0});
  auto c = config("ReK:1", 1.0, 1e-3);
  c.monitor_every = 100;
  const auto traj = integrate(c, f);
  CHECK(traj.back().alphas.back() == Complex(-1.0));
  const auto fd = drift_report(traj);
  CHECK(max_drift(fd, {"ReK", "ImK"}) < 1e-9);
  // K_0 of the finite problem does not Poisson commute with K_n there.
  CHECK(fd.at("K0") > 1e-3);

  // Half-line data padded with zeros: the truncation is invisible until the
  // support spreads to the last stored slot.
  CoeffVector head = {0.3, Complex(0.1, -0.2), 0.4, 0.2};
  head.resize(40, 0.0);
  c.t_end = 0.5;
  const auto hd = drift_report(integrate(c, VerblunskySequence::infinite(head)));
  CHECK(max_drift(hd, {"ReK", "ImK2", "ImK3"}) < 1e-9);
  // On the half-line {K_1, conj K_1} = i, so Im K_1 grows at rate 1/2
  // under the Re K_1 flow.
  CHECK(std::abs(hd.at("ImK1") - 0.25) < 1e-9);
}

TEST_CASE("half-line K_1 against its conjugate") {
  // K_1 = conj(alpha_0) - sum_{k>=1} alpha_{k-1} conj(alpha_k) gives
  // {K_1, conj K_1} = i [rho_0^2 rho_1^2
  //                      + sum_{k>=1} rho_k^2 (|alpha_{k-1}|^2 - |alpha_{k+1}|^2)],
  // which telescopes to i. Trailing zeros keep the truncation out of it.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    auto a = random_period(8, rng);
    if (trial == 0) std::fill(a.begin(), a.end(), Complex(0.0));
    a.resize(10, 0.0);
    const auto s = VerblunskySequence::infinite(a);
    const auto g = HamiltonianSpec{HamiltonianKind::K, 1}.gradient(s);
    CHECK(std::abs(bracket(g, conjugate_gradient(g), s) - kI) < 1e-14);
  }
}

TEST_CASE("time reversal") {
  const auto s = random_seq(4, 4);
  auto fwd = config("AL", 0.5, 1e-3);
  const auto a = integrate(fwd, s);
  fwd.backward = true;
  const auto back = integrate(fwd, with_active_slots(s, a.back().alphas));
  CHECK(back.back().t < 0.0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(back.back().alphas[j] - s.alphas()[j]) < 1e-10);
}

TEST_CASE("trivial runs and drift reports") {
  const auto s = random_seq(4, 5);
  const auto t0 = integrate(config("AL", 0.0, 1e-3), s);
  CHECK(t0.size() == 1);
  for (const auto& [name, v] : drift_report(t0)) CHECK(v == 0.0);

  const auto z = VerblunskySequence::periodic({0.0, 0.0});
  for (const auto& [name, v] : drift_report(integrate(config("ReK:1", 1.0, 0.1), z))) CHECK(v == 0.0);

  const auto traj = integrate(config("AL", 0.35, 0.1), s);
  CHECK(traj.size() == 5);
  CHECK(traj.back().t == doctest::Approx(0.35));
}

TEST_CASE("flow errors") {
  const auto edge = VerblunskySequence::unchecked(SequenceCase::Periodic, {1.0 - 1e-10, 0.0});
  try {
    integrate(config("AL", 1.0, 1e-3), edge);
    FAIL("expected DiskExit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DiskExit);
    CHECK(e.index() == 0);
  }
  CHECK_THROWS_AS(integrate(config("AL", 1.0, 0.0), random_seq(2, 1)), Error);
  CHECK_THROWS_AS(drift_report({}), Error);
  CHECK_THROWS_AS(integrate(config("K:1", 1.0, 1e-3), random_seq(2, 1)), Error);
  CHECK_THROWS_AS(integrate(config("Kbar:2", 1.0, 1e-3), random_seq(2, 1)), Error);
}

TEST_CASE("trajectory csv") {
  std::ostringstream out;
  write_trajectory_csv(out, integrate(config("AL", 0.2, 0.1), VerblunskySequence::periodic({0.1, 0.2})));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,alpha0_re,alpha0_im,alpha1_re,alpha1_im,K0,ReK1,ImK1,ReK2,ImK2,unitarity,maxmod");
  std::size_t lines = 0;
  for (std::string l; std::getline(in, l);) ++lines;
  CHECK(lines == 3);
}

TEST_CASE("RK4 order at coarse steps") {
  auto c = config("AL", 5.0, 0.05);
  c.monitor_every = 10;
  const auto oc = order_check(c, random_seq(4, 6), {"K0", "ReK", "ImK", "cpoly"});
  CHECK(oc.ratio >= 8.0);
  CHECK(oc.observed_order > 3.0);
}
