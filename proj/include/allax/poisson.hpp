#pragma once

#include <functional>
#include <string>

#include "allax/cmv.hpp"
#include "allax/coeffs.hpp"
#include "allax/matrix.hpp"

namespace allax {

/// Wirtinger partials of a scalar observable over the active slots.
struct WirtingerGradient {
  CoeffVector d_alpha;
  CoeffVector d_alphabar;

  std::size_t size() const noexcept { return d_alpha.size(); }
  static WirtingerGradient zeros(std::size_t m) {
    return {CoeffVector(m), CoeffVector(m)};
  }
};

WirtingerGradient operator+(WirtingerGradient a, const WirtingerGradient& b);
WirtingerGradient operator-(WirtingerGradient a, const WirtingerGradient& b);
WirtingerGradient operator*(Complex s, WirtingerGradient a);

/// Gradient of conj(f) from the gradient of f.
WirtingerGradient conjugate_gradient(const WirtingerGradient& g);

/// Largest |difference| over both components.
double max_abs_diff(const WirtingerGradient& a, const WirtingerGradient& b);

enum class GradientMethod { Analytic, FiniteDifference };

std::string_view to_string(GradientMethod m);

using ScalarFunction = std::function<Complex(const VerblunskySequence&)>;
using GradientFunction =
    std::function<WirtingerGradient(const VerblunskySequence&)>;

/// A scalar function of the coefficients with an optional closed-form
/// gradient. With method FiniteDifference, or with no analytic gradient,
/// gradients come from central differences.
struct Observable {
  ScalarFunction evaluate;
  GradientFunction analytic;
  GradientMethod method = GradientMethod::Analytic;
  double fd_step = 1e-6;

  WirtingerGradient gradient(const VerblunskySequence& seq) const;
};

/// f(seq) = alpha_j or conj(alpha_j) at a fixed active slot.
Observable coordinate_observable(std::size_t j, bool conjugated = false);

/// {f, g} = i sum_j rho_j^2 (df/dalphabar_j dg/dalpha_j
///                           - df/dalpha_j dg/dalphabar_j).
Complex bracket(const WirtingerGradient& gf, const WirtingerGradient& gg,
                const VerblunskySequence& seq);
Complex bracket(const Observable& f, const Observable& g,
                const VerblunskySequence& seq);

/// Central differences in u_j = Re alpha_j and v_j = Im alpha_j, combined
/// as d/dalpha = (d/du - i d/dv)/2 and d/dalphabar = (d/du + i d/dv)/2.
/// Throws StepTooLarge when a perturbed slot could leave the disk.
WirtingerGradient fd_gradient(const ScalarFunction& f,
                              const VerblunskySequence& seq,
                              double step = 1e-6);

/// Copy of seq with one active slot replaced; the case is kept and no
/// validation is done.
VerblunskySequence with_slot(const VerblunskySequence& seq, std::size_t j,
                             Complex value);

/// Gradient of K_{n+1} from the closed-form even/odd slot formulas, fed
/// with entries of E^n. Throws RhoDegenerate if some rho_j < 1e-9.
WirtingerGradient grad_K(unsigned n_plus_1, const VerblunskySequence& seq);

/// Gradient of K_{n+1} as (1/d) Tr(dQ_(d) Q_(d)^n). Needs dp >= 2n+3.
WirtingerGradient grad_K_via_trace(unsigned n_plus_1,
                                   const VerblunskySequence& seq,
                                   std::size_t d);

/// A matrix-valued function of the coefficients whose entries are bracketed
/// one at a time.
struct MatrixObservable {
  std::function<ComplexMatrix(const VerblunskySequence&)> evaluate;
  /// dM/dbeta_j for active slot j.
  std::function<ComplexMatrix(const VerblunskySequence&, std::size_t,
                              Wirtinger)>
      derivative;
};

/// Q_(d) with derivatives summed over the d copies of each slot.
MatrixObservable floquet_observable(std::size_t d);
/// C_f with derivatives over alpha_0 .. alpha_{k-2}.
MatrixObservable finite_cmv_observable();
/// Section of the half-line CMV matrix of the given size.
MatrixObservable half_line_observable(std::size_t size);

/// dM/dalpha_j and dM/dalphabar_j by central differences.
std::pair<ComplexMatrix, ComplexMatrix> fd_matrix_derivative(
    const MatrixObservable& m, const VerblunskySequence& seq, std::size_t j,
    double step = 1e-6);

/// Entrywise {M_ab, g}. Matrix derivatives are analytic or central
/// differences according to `method`.
ComplexMatrix bracket_matrix(const MatrixObservable& m,
                             const WirtingerGradient& g,
                             const VerblunskySequence& seq,
                             GradientMethod method = GradientMethod::Analytic,
                             double step = 1e-6);

}  // namespace allax
