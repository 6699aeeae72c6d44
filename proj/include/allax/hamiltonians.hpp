#pragma once

#include <string>
#include <vector>

#include "allax/coeffs.hpp"
#include "allax/matrix.hpp"
#include "allax/poisson.hpp"

namespace allax {

enum class HamiltonianKind { K, Kbar, ReK, ImK, K0, LogK0, AL };

/// A flow generator. ReK and ImK are Re K_n and Im K_n; AL is
/// 2 Re K_1 - 2 log K_0.
struct HamiltonianSpec {
  HamiltonianKind kind = HamiltonianKind::AL;
  unsigned n = 1;

  /// Accepts AL, K:n, Kbar:n, ReK:n, ImK:n, K0, logK0.
  static HamiltonianSpec parse(const std::string& text);
  std::string name() const;

  /// Dispatches on the sequence case: periodic K_n, finite K_n^f with K_0^f,
  /// or the half-line K_n^i with the default window.
  Complex evaluate(const VerblunskySequence& seq) const;
  WirtingerGradient gradient(const VerblunskySequence& seq,
                             GradientMethod method = GradientMethod::Analytic,
                             double fd_step = 1e-6) const;
  Observable observable(GradientMethod method = GradientMethod::Analytic) const;

  /// False for K and Kbar. Only real generators have Hamiltonian flows.
  bool is_real_valued() const noexcept {
    return kind != HamiltonianKind::K && kind != HamiltonianKind::Kbar;
  }
};

/// Smallest d with dp even and dp >= 2n+1.
std::size_t minimal_d(std::size_t p, unsigned n);

/// K_n = Tr(Q_(d)^n)/(dn) with the minimal d.
Complex K(unsigned n, const VerblunskySequence& seq);
/// Same with an explicit d; meaningful once dp >= 2n+1.
Complex K_with_d(unsigned n, const VerblunskySequence& seq, std::size_t d);
/// (1/n) sum over one period of the diagonal of E^n.
Complex K_from_diagonal(unsigned n, const VerblunskySequence& seq);

/// Tr(Q_(d)^m) and its gradient m Tr(dQ_(d) Q_(d)^{m-1}), valid for any d.
Complex trace_power(unsigned m, const VerblunskySequence& seq, std::size_t d);
WirtingerGradient grad_trace_power(unsigned m, const VerblunskySequence& seq,
                                   std::size_t d);

/// Product of rho_j^2 over one period (periodic), over j <= k-2 (finite) or
/// over all stored slots (half-line).
double K0(const VerblunskySequence& seq);
/// Finite case product including the boundary slot; identically zero.
double K0_finite_full(const VerblunskySequence& seq);
WirtingerGradient grad_K0(const VerblunskySequence& seq);

/// (1/n) Tr(C_f^n).
Complex K_finite(unsigned n, const VerblunskySequence& seq);
/// Gradient over alpha_0 .. alpha_{k-2}: Tr(dC_f C_f^{n-1}).
WirtingerGradient grad_K_finite(unsigned n, const VerblunskySequence& seq);

struct InfiniteValue {
  Complex value;
  double tail_bound = 0.0;
  std::size_t window = 0;
};

/// (1/n) sum_{k=0}^{window} (C^n)_kk on a section large enough to be exact.
/// Needs window >= N + 4n (WindowTooSmall).
InfiniteValue K_infinite(unsigned n, const VerblunskySequence& seq,
                         std::size_t window);
/// Smallest admissible window, rounded up to even.
std::size_t default_infinite_window(unsigned n, const VerblunskySequence& seq);
/// Gradient of the windowed sum over every active slot.
WirtingerGradient grad_K_infinite(unsigned n, const VerblunskySequence& seq,
                                  std::size_t window);

/// Coefficients of det(z - M), highest power first, from Newton's
/// identities on Tr(M^k). Dimension at most 256.
std::vector<Complex> char_poly_coeffs(const ComplexMatrix& m);

/// Delta(z) = det(z - Q_(1)) / (z^{p/2} prod rho_j) + 2.
Complex discriminant(const VerblunskySequence& seq, Complex z);

/// Delta(e^{i theta}) = 2 (cos theta + Re(conj(a) a')) / (rho rho') for a
/// period-two sequence (a, a').
double discriminant_period_two(Complex a, Complex a_prime, double theta);

/// Coefficients c_0 .. c_p (highest power first) of
/// z^{p/2} (prod rho_j) Delta(z) = det(z - Q_(1)) + 2 (prod rho_j) z^{p/2}.
struct DiscriminantPoly {
  std::vector<Complex> c;
  double rho_product = 1.0;
  double k0 = 1.0;
};

DiscriminantPoly discriminant_poly(const VerblunskySequence& seq);

/// (Re c_1, Im c_1, ..., Re c_{p/2-1}, Im c_{p/2-1}, c_{p/2}, K_0): p real
/// conserved quantities.
std::vector<double> invariant_vector(const VerblunskySequence& seq);

}  // namespace allax
