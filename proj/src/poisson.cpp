#include "allax/poisson.hpp"

#include <cmath>
#include <algorithm>
#include <string>
#include <tuple>

namespace allax {

namespace {

constexpr double kRhoFloor = 1e-9;
const Complex kI(0.0, 1.0);

void require_nondegenerate(const VerblunskySequence& seq) {
  const auto slots = seq.active_slots();
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (rho_of(slots[j]) < kRhoFloor)
      throw Error(ErrorCode::RhoDegenerate,
                  "rho_" + std::to_string(j) + " below 1e-9",
                  static_cast<std::int64_t>(j));
  }
}

void require_periodic(const VerblunskySequence& seq) {
  if (seq.sequence_case() != SequenceCase::Periodic)
    throw Error(ErrorCode::InvalidConfig, "periodic sequence required");
  if (seq.size() % 2 != 0)
    throw Error(ErrorCode::OddPeriodNotCanonicalized, "odd stored period");
}

}  // namespace

WirtingerGradient operator+(WirtingerGradient a, const WirtingerGradient& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "gradient lengths differ");
  for (std::size_t j = 0; j < a.size(); ++j) {
    a.d_alpha[j] += b.d_alpha[j];
    a.d_alphabar[j] += b.d_alphabar[j];
  }
  return a;
}

WirtingerGradient operator-(WirtingerGradient a, const WirtingerGradient& b) {
  return a + (Complex(-1.0) * b);
}

WirtingerGradient operator*(Complex s, WirtingerGradient a) {
  for (std::size_t j = 0; j < a.size(); ++j) {
    a.d_alpha[j] *= s;
    a.d_alphabar[j] *= s;
  }
  return a;
}

WirtingerGradient conjugate_gradient(const WirtingerGradient& g) {
  WirtingerGradient out = WirtingerGradient::zeros(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    out.d_alpha[j] = std::conj(g.d_alphabar[j]);
    out.d_alphabar[j] = std::conj(g.d_alpha[j]);
  }
  return out;
}

double max_abs_diff(const WirtingerGradient& a, const WirtingerGradient& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "gradient lengths differ");
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    m = std::max(m, std::abs(a.d_alpha[j] - b.d_alpha[j]));
    m = std::max(m, std::abs(a.d_alphabar[j] - b.d_alphabar[j]));
  }
  return m;
}

std::string_view to_string(GradientMethod m) {
  return m == GradientMethod::Analytic ? "analytic" : "fd";
}

WirtingerGradient Observable::gradient(const VerblunskySequence& seq) const {
  if (method == GradientMethod::Analytic && analytic) return analytic(seq);
  if (!evaluate)
    throw Error(ErrorCode::GradientUnavailable, "observable has no evaluator");
  return fd_gradient(evaluate, seq, fd_step);
}

Observable coordinate_observable(std::size_t j, bool conjugated) {
  Observable o;
  o.evaluate = [j, conjugated](const VerblunskySequence& s) {
    const Complex a = s.active_slots()[j];
    return conjugated ? std::conj(a) : a;
  };
  o.analytic = [j, conjugated](const VerblunskySequence& s) {
    auto g = WirtingerGradient::zeros(s.active_slots().size());
    (conjugated ? g.d_alphabar : g.d_alpha)[j] = 1.0;
    return g;
  };
  return o;
}

Complex bracket(const WirtingerGradient& gf, const WirtingerGradient& gg,
                const VerblunskySequence& seq) {
  const auto slots = seq.active_slots();
  if (gf.size() != slots.size() || gg.size() != slots.size())
    throw Error(ErrorCode::GradientUnavailable,
                "gradient does not cover the active slots");
  Complex sum = 0.0;
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const double rho2 = 1.0 - std::norm(slots[j]);
    sum += rho2 * (gf.d_alphabar[j] * gg.d_alpha[j] -
                   gf.d_alpha[j] * gg.d_alphabar[j]);
  }
  return kI * sum;
}

Complex bracket(const Observable& f, const Observable& g,
                const VerblunskySequence& seq) {
  return bracket(f.gradient(seq), g.gradient(seq), seq);
}

VerblunskySequence with_slot(const VerblunskySequence& seq, std::size_t j,
                             Complex value) {
  CoeffVector a = seq.alphas();
  a.at(j) = value;
  return VerblunskySequence::unchecked(seq.sequence_case(), std::move(a));
}

WirtingerGradient fd_gradient(const ScalarFunction& f,
                              const VerblunskySequence& seq, double step) {
  const auto slots = seq.active_slots();
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (!(std::abs(slots[j]) < 1.0 - 2.0 * step))
      throw Error(ErrorCode::StepTooLarge,
                  "finite-difference step leaves the disk at slot " +
                      std::to_string(j),
                  static_cast<std::int64_t>(j));
  }
  auto g = WirtingerGradient::zeros(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const Complex a = slots[j];
    const Complex du = (f(with_slot(seq, j, a + step)) -
                        f(with_slot(seq, j, a - step))) /
                       (2.0 * step);
    const Complex dv = (f(with_slot(seq, j, a + kI * step)) -
                        f(with_slot(seq, j, a - kI * step))) /
                       (2.0 * step);
    g.d_alpha[j] = 0.5 * (du - kI * dv);
    g.d_alphabar[j] = 0.5 * (du + kI * dv);
  }
  return g;
}

WirtingerGradient grad_K(unsigned n_plus_1, const VerblunskySequence& seq) {
  if (n_plus_1 == 0)
    throw Error(ErrorCode::InvalidConfig, "grad_K needs n+1 >= 1");
  require_periodic(seq);
  require_nondegenerate(seq);
  const ExtendedPower ep(seq, n_plus_1 - 1);
  auto E = [&](std::int64_t a, std::int64_t b) { return ep.entry(a, b); };
  auto al = [&](std::int64_t i) { return alpha_at(seq, i); };
  auto ab = [&](std::int64_t i) { return std::conj(alpha_at(seq, i)); };
  auto rh = [&](std::int64_t i) { return rho_at(seq, i); };

  const std::size_t p = seq.size();
  auto g = WirtingerGradient::zeros(p);
  for (std::size_t s = 0; s < p; ++s) {
    const auto j = static_cast<std::int64_t>(s);
    const double two_rho = 2.0 * rh(j);
    if (j % 2 == 0) {
      g.d_alpha[s] = -ab(j) * ab(j + 1) / two_rho * E(j + 1, j) -
                     ab(j) * rh(j + 1) / two_rho * E(j + 2, j) -
                     ab(j) * rh(j - 1) / two_rho * E(j - 1, j + 1) +
                     ab(j) * al(j - 1) / two_rho * E(j, j + 1) -
                     ab(j + 1) * E(j + 1, j + 1) - rh(j + 1) * E(j + 2, j + 1);
      g.d_alphabar[s] = rh(j - 1) * E(j - 1, j) - al(j - 1) * E(j, j) -
                        al(j) * ab(j + 1) / two_rho * E(j + 1, j) -
                        al(j) * rh(j + 1) / two_rho * E(j + 2, j) -
                        al(j) * rh(j - 1) / two_rho * E(j - 1, j + 1) +
                        al(j) * al(j - 1) / two_rho * E(j, j + 1);
    } else {
      g.d_alpha[s] = -ab(j) * rh(j - 1) / two_rho * E(j + 1, j - 1) +
                     ab(j) * al(j - 1) / two_rho * E(j + 1, j) -
                     ab(j) * ab(j + 1) / two_rho * E(j, j + 1) -
                     ab(j) * rh(j + 1) / two_rho * E(j, j + 2) -
                     ab(j + 1) * E(j + 1, j + 1) - rh(j + 1) * E(j + 1, j + 2);
      g.d_alphabar[s] = rh(j - 1) * E(j, j - 1) - al(j - 1) * E(j, j) -
                        al(j) * rh(j - 1) / two_rho * E(j + 1, j - 1) -
                        al(j) * ab(j + 1) / two_rho * E(j, j + 1) -
                        al(j) * rh(j + 1) / two_rho * E(j, j + 2) +
                        al(j) * al(j - 1) / two_rho * E(j + 1, j);
    }
  }
  return g;
}

WirtingerGradient grad_K_via_trace(unsigned n_plus_1,
                                   const VerblunskySequence& seq,
                                   std::size_t d) {
  if (n_plus_1 == 0)
    throw Error(ErrorCode::InvalidConfig, "grad_K_via_trace needs n+1 >= 1");
  require_periodic(seq);
  require_nondegenerate(seq);
  const std::size_t p = seq.size();
  if (d == 0 || d * p < 2 * n_plus_1 + 1)
    throw Error(ErrorCode::WindowTooSmall,
                "trace gradient needs dp >= 2(n+1)+1");
  const auto mo = floquet_observable(d);
  const ComplexMatrix qn = power(mo.evaluate(seq), n_plus_1 - 1);
  const double inv_d = 1.0 / static_cast<double>(d);
  auto g = WirtingerGradient::zeros(p);
  for (std::size_t j = 0; j < p; ++j) {
    g.d_alpha[j] =
        inv_d * trace_of_product(mo.derivative(seq, j, Wirtinger::Alpha), qn);
    g.d_alphabar[j] =
        inv_d * trace_of_product(mo.derivative(seq, j, Wirtinger::AlphaBar), qn);
  }
  return g;
}

MatrixObservable floquet_observable(std::size_t d) {
  MatrixObservable m;
  m.evaluate = [d](const VerblunskySequence& s) { return build_floquet(s, d); };
  m.derivative = [d](const VerblunskySequence& s, std::size_t j, Wirtinger w) {
    const std::size_t p = s.size();
    CoeffVector a(d * p);
    for (std::size_t q = 0; q < a.size(); ++q) a[q] = s.alphas()[q % p];
    ComplexMatrix sum(d * p, d * p);
    for (std::size_t r = 0; r < d; ++r)
      sum += cmv_derivative(a, Closure::Periodic, j + r * p, w);
    return sum;
  };
  return m;
}

MatrixObservable finite_cmv_observable() {
  MatrixObservable m;
  m.evaluate = [](const VerblunskySequence& s) { return build_finite_cmv(s); };
  m.derivative = [](const VerblunskySequence& s, std::size_t j, Wirtinger w) {
    return cmv_derivative(s.alphas(), Closure::Open, j, w);
  };
  return m;
}

MatrixObservable half_line_observable(std::size_t size) {
  MatrixObservable m;
  m.evaluate = [size](const VerblunskySequence& s) {
    return build_half_line_section(s, size);
  };
  m.derivative = [size](const VerblunskySequence& s, std::size_t j,
                        Wirtinger w) {
    if (j >= size) return ComplexMatrix(size, size);
    return cmv_derivative(unrolled_alphas(s, size), Closure::Open, j, w);
  };
  return m;
}

std::pair<ComplexMatrix, ComplexMatrix> fd_matrix_derivative(
    const MatrixObservable& m, const VerblunskySequence& seq, std::size_t j,
    double step) {
  const Complex a = seq.active_slots()[j];
  if (!(std::abs(a) < 1.0 - 2.0 * step))
    throw Error(ErrorCode::StepTooLarge,
                "finite-difference step leaves the disk at slot " +
                    std::to_string(j),
                static_cast<std::int64_t>(j));
  const double inv = 1.0 / (2.0 * step);
  ComplexMatrix du = m.evaluate(with_slot(seq, j, a + step)) -
                     m.evaluate(with_slot(seq, j, a - step));
  ComplexMatrix dv = m.evaluate(with_slot(seq, j, a + kI * step)) -
                     m.evaluate(with_slot(seq, j, a - kI * step));
  du *= inv;
  dv *= inv;
  ComplexMatrix d_alpha = 0.5 * (du - kI * dv);
  ComplexMatrix d_alphabar = 0.5 * (du + kI * dv);
  return {std::move(d_alpha), std::move(d_alphabar)};
}

ComplexMatrix bracket_matrix(const MatrixObservable& m,
                             const WirtingerGradient& g,
                             const VerblunskySequence& seq,
                             GradientMethod method, double step) {
  const auto slots = seq.active_slots();
  if (g.size() != slots.size())
    throw Error(ErrorCode::GradientUnavailable,
                "gradient does not cover the active slots");
  ComplexMatrix value = m.evaluate(seq);
  ComplexMatrix out(value.rows(), value.cols());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    if (g.d_alpha[j] == 0.0 && g.d_alphabar[j] == 0.0) continue;
    const double rho2 = 1.0 - std::norm(slots[j]);
    ComplexMatrix d_alpha, d_alphabar;
    if (method == GradientMethod::Analytic) {
      d_alpha = m.derivative(seq, j, Wirtinger::Alpha);
      d_alphabar = m.derivative(seq, j, Wirtinger::AlphaBar);
    } else {
      std::tie(d_alpha, d_alphabar) = fd_matrix_derivative(m, seq, j, step);
    }
    out += (kI * rho2 * g.d_alpha[j]) * d_alphabar;
    out -= (kI * rho2 * g.d_alphabar[j]) * d_alpha;
  }
  return out;
}

}  // namespace allax
