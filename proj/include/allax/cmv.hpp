#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "allax/coeffs.hpp"
#include "allax/matrix.hpp"

namespace allax {

/// Absolute threshold below which an entry counts as a structural zero.
inline constexpr double kStructuralZero = 1e-13;

/// Theta(alpha) = [[conj(alpha), rho], [rho, -alpha]].
struct ThetaBlock {
  Complex alpha;
  double rho = 1.0;

  Complex operator()(int r, int c) const;
  ComplexMatrix matrix() const;
};

/// Throws ModulusOutOfRange if |alpha| > 1 + 1e-12.
ThetaBlock make_theta(Complex alpha);

/// Selects d/d(alpha) or d/d(conj alpha).
enum class Wirtinger { Alpha, AlphaBar };

/// Entries of dTheta/dalpha or dTheta/dalphabar, using
/// drho/dalpha = -conj(alpha)/(2 rho) and drho/dalphabar = -alpha/(2 rho),
/// both from rho^2 = 1 - alpha conj(alpha).
Complex theta_derivative(Complex alpha, int r, int c, Wirtinger w);

/// How the last Theta block is closed.
///
/// Periodic: Theta_{n-1} couples indices n-1 and 0 (needs even n). This is
/// the restriction of the extended matrix to n-periodic sequences.
/// Open: M starts with the 1x1 block [1]; a block that would run past the
/// end is cut to the 1x1 entry conj(alpha_{n-1}).
enum class Closure { Periodic, Open };

struct CmvFactors {
  ComplexMatrix L;
  ComplexMatrix M;
  ComplexMatrix product() const { return L * M; }
};

/// L carries Theta_q for even q, M for odd q; Theta_q sits on rows/cols
/// (q, q+1).
CmvFactors build_factors(std::span<const Complex> alphas, Closure closure);

/// d(LM)/d(beta_q) where beta_q is alpha or conj(alpha) at position q.
ComplexMatrix cmv_derivative(std::span<const Complex> alphas, Closure closure,
                             std::size_t q, Wirtinger w);

/// Finite k x k CMV matrix C_f = L_f M_f.
CmvFactors build_finite_factors(const VerblunskySequence& seq);
ComplexMatrix build_finite_cmv(const VerblunskySequence& seq);

/// Position-space coefficients alpha_0 .. alpha_{size-1} of a periodic
/// sequence (no validation, so boundary values such as -1 pass through).
CoeffVector unrolled_alphas(const VerblunskySequence& seq, std::size_t size);

/// Floquet matrix Q_(d) of size dp, assembled from Theta blocks with
/// wraparound indices. Needs dp even.
ComplexMatrix build_floquet(const VerblunskySequence& seq, std::size_t d);

/// Principal size x size section of the half-line CMV matrix. Exact when
/// size is even.
ComplexMatrix build_half_line_section(const VerblunskySequence& seq,
                                      std::size_t size);

/// Entry oracle for the doubly infinite extended CMV matrix of a periodic
/// sequence.
class ExtendedCmvOracle {
 public:
  explicit ExtendedCmvOracle(const VerblunskySequence& seq);

  Complex entry(std::int64_t j, std::int64_t k) const;
  std::size_t period() const noexcept { return thetas_.size(); }

  /// Rows/cols [first, first + size).
  ComplexMatrix window(std::int64_t first, std::size_t size) const;

 private:
  Complex l_entry(std::int64_t j, std::int64_t m) const;
  Complex m_entry(std::int64_t m, std::int64_t k) const;
  const ThetaBlock& theta(std::int64_t q) const;

  std::vector<ThetaBlock> thetas_;
};

Complex extended_entry(const ExtendedCmvOracle& oracle, std::int64_t j,
                       std::int64_t k);

/// Q_(d) from the folding sum Q_jk = sum_l E_{j, k + l dp}.
ComplexMatrix floquet_via_sum(const VerblunskySequence& seq, std::size_t d);

/// Entries of E^n for a periodic sequence, read off Q_(D)^n with D large
/// enough that no folding reaches the band |j - k| <= 2n.
class ExtendedPower {
 public:
  ExtendedPower(const VerblunskySequence& seq, unsigned n);

  Complex entry(std::int64_t j, std::int64_t k) const;
  unsigned exponent() const noexcept { return n_; }

  /// (E^n)_+ folded onto dp-periodic sequences: the matrix of the
  /// restriction of (E^n)_+ to the space of period dp.
  ComplexMatrix restricted_plus(std::size_t dp) const;

 private:
  unsigned n_;
  std::int64_t size_;
  ComplexMatrix power_;
};

/// Upper part with the diagonal halved.
ComplexMatrix plus_projection(const ComplexMatrix& m);

/// diag((-1)^l (i/2) K_0), l = 0 .. size-1, K_0 the product of rho_j^2 over
/// one period.
ComplexMatrix build_p_matrix(const VerblunskySequence& seq, std::size_t size);

enum class BandGeometry {
  /// Plain row/column offsets; index parity is measured from `origin`.
  Window,
  /// Cyclic offsets in (-size/2, size/2]; used for Q_(d)^n.
  Cyclic,
};

struct BandViolation {
  std::size_t row;
  std::size_t col;
  double magnitude;
};

/// Checks the zero pattern of an n-th power of a CMV-type matrix:
/// zero for |j-k| >= 2n+1, for j-k = 2n with j,k even and for j-k = -2n with
/// j,k odd. Cyclic geometry needs size >= 4n+2 (WindowTooSmall otherwise).
std::vector<BandViolation> band_shape_check(const ComplexMatrix& mn, unsigned n,
                                            BandGeometry geometry,
                                            std::int64_t origin = 0);

/// True iff (j, k) lies outside the shape of an n-th power.
bool outside_band(std::int64_t j, std::int64_t k, unsigned n);

/// CSV "row,col,re,im" of entries with modulus above the structural zero.
void write_matrix_csv(std::ostream& out, const ComplexMatrix& m);

}  // namespace allax
