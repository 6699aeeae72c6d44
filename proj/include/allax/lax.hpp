#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "allax/coeffs.hpp"
#include "allax/matrix.hpp"
#include "allax/poisson.hpp"

namespace allax {

enum class LaxKind {
  PeriodicK,
  PeriodicKbar,
  PeriodicReK,
  PeriodicImK,
  PeriodicK0,
  FiniteK,
  FiniteKbar,
  InfiniteK,
  InfiniteKbar,
};

struct LaxVariant {
  LaxKind kind = LaxKind::PeriodicK;
  unsigned n = 1;

  /// Accepts the enumerator names, e.g. "PeriodicReK".
  static LaxVariant parse(const std::string& name, unsigned n = 1);
  std::string name() const;
  SequenceCase sequence_case() const;
};

/// All nine variants at order n.
std::vector<LaxVariant> all_lax_variants(unsigned n);

struct ResidualReport {
  LaxVariant variant;
  GradientMethod method = GradientMethod::Analytic;
  std::size_t d = 1;
  std::size_t matrix_dim = 0;
  double max_abs_residual = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  /// Residual maxima over entries (k,k), (k,k-1), (k+1,k-1), (k+1,k) with k
  /// even, and over every other compared entry.
  std::array<double, 4> orbit_class_max{};
  double other_max = 0.0;
  /// Largest |RHS| outside the CMV band, when the geometry allows the check.
  std::optional<double> rhs_outside_band;
  /// Periodic only: dp < 5, where Q_(d) entries are sums of several E
  /// entries.
  bool small_dp = false;
};

/// Max-abs difference between {L, H} and the commutator side of the Lax
/// identity. L is Q_(d) (periodic), C_f (finite) or a half-line section
/// compared on guarded interior entries (infinite; d is ignored).
ResidualReport lax_residual(const LaxVariant& variant,
                            const VerblunskySequence& seq, std::size_t d,
                            GradientMethod method = GradientMethod::Analytic,
                            double fd_step = 1e-6);

/// Left and right sides of the identity, before differencing.
struct LaxSides {
  ComplexMatrix lhs;
  ComplexMatrix rhs;
  /// Compared index range [lo, hi) on both axes.
  std::size_t lo = 0;
  std::size_t hi = 0;
};

LaxSides lax_sides(const LaxVariant& variant, const VerblunskySequence& seq,
                   std::size_t d, GradientMethod method = GradientMethod::Analytic,
                   double fd_step = 1e-6);

struct StairReport {
  std::vector<std::ptrdiff_t> shape;  // last nonzero column per row, -1 if none
  std::size_t checked_entries = 0;
  /// Entries with j > j(i) where an identity fails (exact comparison).
  std::vector<std::pair<std::size_t, std::size_t>> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// For j > j(i): [A, B_+]_ij == [A, B]_ij and [A, B_-]_ij == 0, where
/// B_- = B - B_+. Throws NotStairShaped if j(i) decreases.
StairReport stair_commutator_check(const ComplexMatrix& a,
                                   const ComplexMatrix& b);

struct ObstructionReport {
  Complex bracket_trace;  // Tr {C_f, K_0^f}
  Complex closed_form;    // -i K_0^f (conj(alpha_0) - alpha_{k-2})
  double mismatch = 0.0;
};

ObstructionReport finite_k0_obstruction(const VerblunskySequence& seq);

struct ConservationReport {
  double trace_rhs = 0.0;      // |Tr RHS|
  double trace_lhs = 0.0;      // |Tr LHS|
  double scalar_mismatch = 0.0;  // |Tr LHS - {Tr L, H}|
  double power_brackets = 0.0;   // max_{m<=3} |{Tr L^m, H}|
};

/// Trace consistency of a Lax identity (periodic and finite variants).
ConservationReport conservation_under_lax(
    const LaxVariant& variant, const VerblunskySequence& seq, std::size_t d,
    GradientMethod method = GradientMethod::Analytic);

}  // namespace allax
