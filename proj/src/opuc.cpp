#include "allax/opuc.hpp"

#include <cmath>
#include <numbers>

namespace allax {

namespace {

constexpr double kRhoFloor = 1e-9;

#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

}  // namespace

Complex PolyCoeffs::operator()(Complex z) const {
  Complex v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * z + *it;
  return v;
}

PolyCoeffs reverse(const PolyCoeffs& p) {
  PolyCoeffs r;
  r.c.reserve(p.c.size());
  for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) r.c.push_back(std::conj(*it));
  return r;
}

std::pair<PolyCoeffs, PolyCoeffs> szego_step(const PolyCoeffs& phi,
                                             const PolyCoeffs& phi_star,
                                             Complex alpha) {
  if (phi.c.size() != phi_star.c.size())
    throw Error(ErrorCode::DegreeMismatch,
                "Phi has degree " + std::to_string(phi.degree()) +
                    ", Phi* has degree " + std::to_string(phi_star.degree()));
  const std::size_t n = phi.c.size();
  PolyCoeffs next{std::vector<Complex>(n + 1)};
  PolyCoeffs next_star{std::vector<Complex>(n + 1)};
  for (std::size_t k = 0; k < n; ++k) {
    next.c[k + 1] += phi.c[k];
    next.c[k] -= std::conj(alpha) * phi_star.c[k];
    next_star.c[k] += phi_star.c[k];
    next_star.c[k + 1] -= alpha * phi.c[k];
  }
  return {std::move(next), std::move(next_star)};
}

std::pair<PolyCoeffs, PolyCoeffs> monic_polynomials(std::span<const Complex> alphas,
                                                    std::size_t n) {
  if (n > alphas.size())
    throw Error(ErrorCode::IndexOutOfDomain, "not enough coefficients",
                static_cast<std::int64_t>(n));
  std::pair<PolyCoeffs, PolyCoeffs> cur{PolyCoeffs::one(), PolyCoeffs::one()};
  for (std::size_t k = 0; k < n; ++k)
    cur = szego_step(cur.first, cur.second, alphas[k]);
  return cur;
}

std::pair<PolyCoeffs, PolyCoeffs> orthonormal_polynomials(
    std::span<const Complex> alphas, std::size_t n) {
  auto polys = monic_polynomials(alphas, n);
  double norm = 1.0;
  for (std::size_t l = 0; l < n; ++l) norm *= rho_of(alphas[l]);
  for (auto& x : polys.first.c) x /= norm;
  for (auto& x : polys.second.c) x /= norm;
  return polys;
}

ComplexMatrix transfer(Complex alpha, Complex z) {
  const double rho = rho_of(alpha);
  if (rho < kRhoFloor)
    throw Error(ErrorCode::RhoDegenerate, "transfer matrix with rho below 1e-9");
  ComplexMatrix a = ComplexMatrix::from_rows(
      {{z, -std::conj(alpha)}, {-alpha * z, Complex(1.0)}});
  a *= 1.0 / rho;
  return a;
}

ComplexMatrix transfer_product(std::span<const Complex> alphas, std::size_t n,
                               Complex z) {
  if (n > alphas.size())
    throw Error(ErrorCode::IndexOutOfDomain, "not enough coefficients",
                static_cast<std::int64_t>(n));
  ComplexMatrix t = ComplexMatrix::identity(2);
  for (std::size_t k = 0; k < n; ++k) t = transfer(alphas[k], z) * t;
  return t;
}

Complex transfer_determinant(std::span<const Complex> alphas, std::size_t n,
                             Complex z) {
  if (n > alphas.size())
    throw Error(ErrorCode::IndexOutOfDomain, "not enough coefficients",
                static_cast<std::int64_t>(n));
  // det T_n = det(B_{n-1} ... B_0) / prod rho_k^2 with the rho-free
  // B_k = [[z, -conj(a)], [-a z, 1]], so only + - * / are needed.
  struct C {
    Wide re, im;
    C operator+(C o) const { return {re + o.re, im + o.im}; }
    C operator-(C o) const { return {re - o.re, im - o.im}; }
    C operator*(C o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  };
  const C zw{z.real(), z.imag()};
  C t[2][2] = {{{1, 0}, {0, 0}}, {{0, 0}, {1, 0}}};
  Wide rho2 = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const C a{alphas[k].real(), alphas[k].imag()};
    const C abar{a.re, -a.im};
    const Wide r2 = 1 - (a.re * a.re + a.im * a.im);
    if (r2 < static_cast<Wide>(kRhoFloor * kRhoFloor))
      throw Error(ErrorCode::RhoDegenerate, "transfer matrix with rho below 1e-9",
                  static_cast<std::int64_t>(k));
    rho2 *= r2;
    const C zero{0, 0};
    const C b[2][2] = {{zw, zero - abar}, {zero - a * zw, {1, 0}}};
    C next[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next[i][j] = b[i][0] * t[0][j] + b[i][1] * t[1][j];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) t[i][j] = next[i][j];
  }
  const C det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
  return {static_cast<double>(det.re / rho2), static_cast<double>(det.im / rho2)};
}

Complex transfer_discriminant(const VerblunskySequence& seq, Complex z) {
  if (z == 0.0) throw Error(ErrorCode::ZeroArgument, "z = 0");
  const std::size_t p = seq.size();
  const Complex tr = transfer_product(seq.alphas(), p, z).trace();
  return tr / std::pow(z, static_cast<double>(p) / 2.0);
}

namespace {

// Phase change of phi along the arc [t0, t1], bisecting until each piece
// turns by less than half a radian.
double arc_phase(const PolyCoeffs& phi, double t0, Complex v0, double t1,
                 Complex v1, int depth) {
  const double step = std::arg(v1 / v0);
  if (std::abs(step) < 0.5 || depth == 0) return step;
  const double tm = 0.5 * (t0 + t1);
  const Complex vm = phi(std::polar(1.0, tm));
  return arc_phase(phi, t0, v0, tm, vm, depth - 1) +
         arc_phase(phi, tm, vm, t1, v1, depth - 1);
}

}  // namespace

int winding_number_on_circle(const PolyCoeffs& phi, std::size_t samples) {
  const double two_pi = 2.0 * std::numbers::pi;
  double total = 0.0;
  double t_prev = 0.0;
  Complex prev = phi(Complex(1.0));
  for (std::size_t k = 1; k <= samples; ++k) {
    const double t = two_pi * static_cast<double>(k) / static_cast<double>(samples);
    const Complex cur = phi(std::polar(1.0, t));
    total += arc_phase(phi, t_prev, prev, t, cur, 40);
    t_prev = t;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / two_pi));
}

}  // namespace allax
