#include "allax/lax.hpp"

#include <algorithm>
#include <cmath>

#include "allax/cmv.hpp"
#include "allax/hamiltonians.hpp"

namespace allax {

namespace {

const Complex kI(0.0, 1.0);

struct VariantName {
  LaxKind kind;
  const char* name;
};

constexpr VariantName kVariantNames[] = {
    {LaxKind::PeriodicK, "PeriodicK"},
    {LaxKind::PeriodicKbar, "PeriodicKbar"},
    {LaxKind::PeriodicReK, "PeriodicReK"},
    {LaxKind::PeriodicImK, "PeriodicImK"},
    {LaxKind::PeriodicK0, "PeriodicK0"},
    {LaxKind::FiniteK, "FiniteK"},
    {LaxKind::FiniteKbar, "FiniteKbar"},
    {LaxKind::InfiniteK, "InfiniteK"},
    {LaxKind::InfiniteKbar, "InfiniteKbar"},
};

std::size_t even_ceil(std::size_t x) { return x + (x % 2); }

/// The Hamiltonian whose bracket with L forms the left side; ReK and ImK
/// variants carry the factor 2.
std::pair<HamiltonianSpec, double> variant_hamiltonian(const LaxVariant& v) {
  switch (v.kind) {
    case LaxKind::PeriodicK:
    case LaxKind::FiniteK:
    case LaxKind::InfiniteK: return {{HamiltonianKind::K, v.n}, 1.0};
    case LaxKind::PeriodicKbar:
    case LaxKind::FiniteKbar:
    case LaxKind::InfiniteKbar: return {{HamiltonianKind::Kbar, v.n}, 1.0};
    case LaxKind::PeriodicReK: return {{HamiltonianKind::ReK, v.n}, 2.0};
    case LaxKind::PeriodicImK: return {{HamiltonianKind::ImK, v.n}, 2.0};
    case LaxKind::PeriodicK0: return {{HamiltonianKind::K0, 1}, 1.0};
  }
  return {};
}

/// Commutator partner X in RHS = [L, X], from X_+ = (L^n)_+.
ComplexMatrix rhs_partner(LaxKind kind, const ComplexMatrix& plus) {
  switch (kind) {
    case LaxKind::PeriodicK:
    case LaxKind::FiniteK:
    case LaxKind::InfiniteK: return kI * plus;
    case LaxKind::PeriodicKbar:
    case LaxKind::FiniteKbar:
    case LaxKind::InfiniteKbar: return kI * plus.adjoint();
    case LaxKind::PeriodicReK: return kI * (plus + plus.adjoint());
    case LaxKind::PeriodicImK: return plus - plus.adjoint();
    case LaxKind::PeriodicK0: break;
  }
  throw Error(ErrorCode::InvalidConfig, "variant has no plus-projection partner");
}

void require_case(const LaxVariant& v, const VerblunskySequence& seq) {
  if (seq.sequence_case() != v.sequence_case())
    throw Error(ErrorCode::InvalidConfig,
                v.name() + " needs a " +
                    std::string(to_string(v.sequence_case())) + " sequence");
}

/// Padded copy covering `size` slots, so every coefficient a section entry
/// depends on is a phase-space variable.
VerblunskySequence padded_half_line(const VerblunskySequence& seq,
                                    std::size_t size) {
  return VerblunskySequence::unchecked(SequenceCase::InfiniteTruncated,
                                       unrolled_alphas(seq, size));
}

std::size_t infinite_section_size(const VerblunskySequence& seq, unsigned n) {
  return even_ceil(seq.size() + 8 * static_cast<std::size_t>(n) + 4);
}

}  // namespace

LaxVariant LaxVariant::parse(const std::string& name, unsigned n) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "variant order must be >= 1");
  for (const auto& [kind, label] : kVariantNames)
    if (name == label) return {kind, n};
  throw Error(ErrorCode::InvalidConfig, "unknown Lax variant '" + name + "'");
}

std::string LaxVariant::name() const {
  for (const auto& [k, label] : kVariantNames)
    if (k == kind) return label;
  return "?";
}

SequenceCase LaxVariant::sequence_case() const {
  switch (kind) {
    case LaxKind::FiniteK:
    case LaxKind::FiniteKbar: return SequenceCase::Finite;
    case LaxKind::InfiniteK:
    case LaxKind::InfiniteKbar: return SequenceCase::InfiniteTruncated;
    default: return SequenceCase::Periodic;
  }
}

std::vector<LaxVariant> all_lax_variants(unsigned n) {
  std::vector<LaxVariant> out;
  for (const auto& entry : kVariantNames) out.push_back({entry.kind, n});
  return out;
}

LaxSides lax_sides(const LaxVariant& variant, const VerblunskySequence& seq,
                   std::size_t d, GradientMethod method, double fd_step) {
  require_case(variant, seq);
  const auto [ham, scale] = variant_hamiltonian(variant);
  const unsigned n = variant.n;
  LaxSides sides;

  switch (variant.sequence_case()) {
    case SequenceCase::Periodic: {
      const MatrixObservable mo = floquet_observable(d);
      const ComplexMatrix q = mo.evaluate(seq);
      const auto g = Complex(scale) * ham.gradient(seq, method, fd_step);
      sides.lhs = bracket_matrix(mo, g, seq, method, fd_step);
      if (variant.kind == LaxKind::PeriodicK0) {
        sides.rhs = commutator(q, build_p_matrix(seq, q.rows()));
      } else {
        const ComplexMatrix plus =
            ExtendedPower(seq, n).restricted_plus(q.rows());
        sides.rhs = commutator(q, rhs_partner(variant.kind, plus));
      }
      sides.hi = q.rows();
      break;
    }
    case SequenceCase::Finite: {
      const MatrixObservable mo = finite_cmv_observable();
      const ComplexMatrix c = mo.evaluate(seq);
      const auto g = ham.gradient(seq, method, fd_step);
      sides.lhs = bracket_matrix(mo, g, seq, method, fd_step);
      sides.rhs = commutator(
          c, rhs_partner(variant.kind, plus_projection(power(c, n))));
      sides.hi = c.rows();
      break;
    }
    case SequenceCase::InfiniteTruncated: {
      const std::size_t size = infinite_section_size(seq, n);
      const std::size_t guard = 4 * static_cast<std::size_t>(n);
      if (size <= 2 * guard)
        throw Error(ErrorCode::TruncationTooTight, "no interior entries left");
      const VerblunskySequence padded = padded_half_line(seq, size);
      const MatrixObservable mo = half_line_observable(size);
      const ComplexMatrix c = mo.evaluate(padded);
      const auto g = ham.gradient(padded, method, fd_step);
      sides.lhs = bracket_matrix(mo, g, padded, method, fd_step);
      sides.rhs = commutator(
          c, rhs_partner(variant.kind, plus_projection(power(c, n))));
      sides.lo = guard;
      sides.hi = size - guard;
      break;
    }
  }
  return sides;
}

ResidualReport lax_residual(const LaxVariant& variant,
                            const VerblunskySequence& seq, std::size_t d,
                            GradientMethod method, double fd_step) {
  const LaxSides sides = lax_sides(variant, seq, d, method, fd_step);
  ResidualReport r;
  r.variant = variant;
  r.method = method;
  r.d = variant.sequence_case() == SequenceCase::Periodic ? d : 1;
  r.matrix_dim = sides.lhs.rows();
  r.small_dp = variant.sequence_case() == SequenceCase::Periodic &&
               sides.lhs.rows() < 5;

  for (std::size_t a = sides.lo; a < sides.hi; ++a) {
    for (std::size_t b = sides.lo; b < sides.hi; ++b) {
      const double v = std::abs(sides.lhs(a, b) - sides.rhs(a, b));
      if (v > r.max_abs_residual) {
        r.max_abs_residual = v;
        r.worst_row = a;
        r.worst_col = b;
      }
      const auto ia = static_cast<std::int64_t>(a);
      const auto ib = static_cast<std::int64_t>(b);
      int cls = -1;
      if (a % 2 == 0 && ib == ia) cls = 0;
      else if (a % 2 == 0 && ib == ia - 1) cls = 1;
      else if (a % 2 == 1 && ib == ia - 2) cls = 2;
      else if (a % 2 == 1 && ib == ia - 1) cls = 3;
      if (cls >= 0)
        r.orbit_class_max[static_cast<std::size_t>(cls)] =
            std::max(r.orbit_class_max[static_cast<std::size_t>(cls)], v);
      else
        r.other_max = std::max(r.other_max, v);
    }
  }

  const std::size_t dim = sides.rhs.rows();
  const bool cyclic = variant.sequence_case() == SequenceCase::Periodic;
  if (!cyclic || dim >= 6) {
    double outside = 0.0;
    for (std::size_t a = sides.lo; a < sides.hi; ++a) {
      for (std::size_t b = sides.lo; b < sides.hi; ++b) {
        auto j = static_cast<std::int64_t>(a);
        auto k = static_cast<std::int64_t>(b);
        if (cyclic) {
          const auto m = static_cast<std::int64_t>(dim);
          std::int64_t delta = wrap_index(j - k, m);
          if (delta > m / 2) delta -= m;
          k = j - delta;
        }
        if (outside_band(j, k, 1))
          outside = std::max(outside, std::abs(sides.rhs(a, b)));
      }
    }
    r.rhs_outside_band = outside;
  }
  return r;
}

StairReport stair_commutator_check(const ComplexMatrix& a,
                                   const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square())
    throw Error(ErrorCode::NonSquare, "stair check needs square matrices");
  if (a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "stair check sizes differ");
  const std::size_t n = a.rows();
  StairReport report;
  report.shape.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = n; c-- > 0;) {
      if (a(i, c) != 0.0) {
        report.shape[i] = static_cast<std::ptrdiff_t>(c);
        break;
      }
    }
    if (i > 0 && report.shape[i] < report.shape[i - 1])
      throw Error(ErrorCode::NotStairShaped,
                  "shape decreases at row " + std::to_string(i),
                  static_cast<std::int64_t>(i));
  }
  const ComplexMatrix bp = plus_projection(b);
  const ComplexMatrix bm = b - bp;
  const ComplexMatrix full = commutator(a, b);
  const ComplexMatrix with_plus = commutator(a, bp);
  const ComplexMatrix with_minus = commutator(a, bm);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (static_cast<std::ptrdiff_t>(j) <= report.shape[i]) continue;
      ++report.checked_entries;
      if (with_plus(i, j) != full(i, j) || with_minus(i, j) != 0.0)
        report.violations.emplace_back(i, j);
    }
  }
  return report;
}

ObstructionReport finite_k0_obstruction(const VerblunskySequence& seq) {
  if (seq.sequence_case() != SequenceCase::Finite)
    throw Error(ErrorCode::InvalidConfig, "finite sequence required");
  const ComplexMatrix lhs =
      bracket_matrix(finite_cmv_observable(), grad_K0(seq), seq);
  ObstructionReport r;
  r.bracket_trace = lhs.trace();
  const auto& a = seq.alphas();
  const double k0 = K0(seq);
  r.closed_form = -kI * k0 * (std::conj(a.front()) - a[a.size() - 2]);
  r.mismatch = std::abs(r.bracket_trace - r.closed_form);
  return r;
}

ConservationReport conservation_under_lax(const LaxVariant& variant,
                                          const VerblunskySequence& seq,
                                          std::size_t d,
                                          GradientMethod method) {
  if (variant.sequence_case() == SequenceCase::InfiniteTruncated)
    throw Error(ErrorCode::InvalidConfig,
                "trace conservation needs a periodic or finite variant");
  const LaxSides sides = lax_sides(variant, seq, d, method);
  const auto [ham, scale] = variant_hamiltonian(variant);
  const auto gh = Complex(scale) * ham.gradient(seq, method);

  ConservationReport r;
  r.trace_rhs = std::abs(sides.rhs.trace());
  r.trace_lhs = std::abs(sides.lhs.trace());

  const bool periodic = variant.sequence_case() == SequenceCase::Periodic;
  const MatrixObservable mo =
      periodic ? floquet_observable(d) : finite_cmv_observable();
  const ComplexMatrix l = mo.evaluate(seq);
  const std::size_t slots = seq.active_slots().size();
  for (unsigned m = 1; m <= 3; ++m) {
    // Gradient of Tr L^m is m Tr(dL L^{m-1}).
    const ComplexMatrix lm = power(l, m - 1);
    auto g = WirtingerGradient::zeros(slots);
    for (std::size_t j = 0; j < slots; ++j) {
      g.d_alpha[j] = static_cast<double>(m) *
                     trace_of_product(mo.derivative(seq, j, Wirtinger::Alpha), lm);
      g.d_alphabar[j] =
          static_cast<double>(m) *
          trace_of_product(mo.derivative(seq, j, Wirtinger::AlphaBar), lm);
    }
    const Complex b = bracket(g, gh, seq);
    if (m == 1) r.scalar_mismatch = std::abs(sides.lhs.trace() - b);
    r.power_brackets = std::max(r.power_brackets, std::abs(b));
  }
  return r;
}

}  // namespace allax
