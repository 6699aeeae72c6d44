#pragma once

#include <span>
#include <utility>
#include <vector>

#include "allax/coeffs.hpp"
#include "allax/matrix.hpp"

namespace allax {

/// Polynomial c_0 + c_1 z + ... + c_n z^n with formal degree n (the leading
/// coefficient may vanish, as it does for reversed polynomials).
struct PolyCoeffs {
  std::vector<Complex> c;

  std::size_t degree() const noexcept { return c.empty() ? 0 : c.size() - 1; }
  Complex operator()(Complex z) const;
  static PolyCoeffs one() { return {{Complex(1.0)}}; }
};

/// z^n conj(p(1/conj z)) for formal degree n: coefficients reversed and
/// conjugated.
PolyCoeffs reverse(const PolyCoeffs& p);

/// (Phi_{n+1}, Phi*_{n+1}) from
/// Phi_{n+1} = z Phi_n - conj(alpha_n) Phi*_n and
/// Phi*_{n+1} = Phi*_n - alpha_n z Phi_n. DegreeMismatch if the inputs have
/// different formal degrees.
std::pair<PolyCoeffs, PolyCoeffs> szego_step(const PolyCoeffs& phi,
                                             const PolyCoeffs& phi_star,
                                             Complex alpha);

/// Monic Phi_n and Phi*_n from alpha_0 .. alpha_{n-1}.
std::pair<PolyCoeffs, PolyCoeffs> monic_polynomials(std::span<const Complex> alphas,
                                                    std::size_t n);

/// phi_n = Phi_n / prod_{l<n} rho_l, and the same for the reversed one.
std::pair<PolyCoeffs, PolyCoeffs> orthonormal_polynomials(
    std::span<const Complex> alphas, std::size_t n);

/// A(alpha, z) = (1/rho) [[z, -conj(alpha)], [-alpha z, 1]]. RhoDegenerate
/// when rho < 1e-9.
ComplexMatrix transfer(Complex alpha, Complex z);

/// T_n(z) = A(alpha_{n-1}, z) ... A(alpha_0, z).
ComplexMatrix transfer_product(std::span<const Complex> alphas, std::size_t n,
                               Complex z);

/// det T_n(z), with the product and the 2x2 determinant carried in binary128
/// (long double where that type is missing). Rounding the entries of T_n to
/// double already moves ad - bc by about eps |T_n|^2, which dominates once
/// the entries grow.
Complex transfer_determinant(std::span<const Complex> alphas, std::size_t n,
                             Complex z);

/// z^{-p/2} Tr T_p(z) over one period. Experimental: compared against the
/// determinant route, never used by the verification path.
Complex transfer_discriminant(const VerblunskySequence& seq, Complex z);

/// Winding number of Phi around 0 along |z| = 1, starting from `samples`
/// equal arcs and bisecting wherever the phase turns by 0.5 rad or more.
/// Equals the degree exactly when all zeros lie in the open disk.
int winding_number_on_circle(const PolyCoeffs& phi, std::size_t samples = 512);

}  // namespace allax
