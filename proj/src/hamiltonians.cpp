#include "allax/hamiltonians.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "allax/cmv.hpp"

namespace allax {

namespace {

const Complex kI(0.0, 1.0);
constexpr std::size_t kMaxCharPolyDim = 256;

unsigned parse_order(const std::string& text, std::size_t colon) {
  unsigned n = 0;
  const char* first = text.data() + colon + 1;
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, n);
  if (ec != std::errc() || ptr != last || n == 0)
    throw Error(ErrorCode::InvalidConfig, "bad Hamiltonian order in '" + text + "'");
  return n;
}

Complex K_base(unsigned n, const VerblunskySequence& seq) {
  switch (seq.sequence_case()) {
    case SequenceCase::Periodic: return K(n, seq);
    case SequenceCase::Finite: return K_finite(n, seq);
    case SequenceCase::InfiniteTruncated:
      return K_infinite(n, seq, default_infinite_window(n, seq)).value;
  }
  return {};
}

WirtingerGradient grad_K_base(unsigned n, const VerblunskySequence& seq) {
  switch (seq.sequence_case()) {
    case SequenceCase::Periodic: return grad_K(n, seq);
    case SequenceCase::Finite: return grad_K_finite(n, seq);
    case SequenceCase::InfiniteTruncated:
      return grad_K_infinite(n, seq, default_infinite_window(n, seq));
  }
  return {};
}

std::size_t even_ceil(std::size_t x) { return x + (x % 2); }

Complex int_pow(Complex z, std::size_t e) {
  Complex r = 1.0;
  for (std::size_t i = 0; i < e; ++i) r *= z;
  return r;
}

double rho_product(const VerblunskySequence& seq) {
  double prod = 1.0;
  for (const auto& a : seq.alphas()) prod *= rho_of(a);
  return prod;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::parse(const std::string& text) {
  if (text == "AL") return {HamiltonianKind::AL, 1};
  if (text == "K0") return {HamiltonianKind::K0, 1};
  if (text == "logK0" || text == "LogK0") return {HamiltonianKind::LogK0, 1};
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(ErrorCode::InvalidConfig, "unknown Hamiltonian '" + text + "'");
  const std::string head = text.substr(0, colon);
  const unsigned n = parse_order(text, colon);
  if (head == "K") return {HamiltonianKind::K, n};
  if (head == "Kbar") return {HamiltonianKind::Kbar, n};
  if (head == "ReK") return {HamiltonianKind::ReK, n};
  if (head == "ImK") return {HamiltonianKind::ImK, n};
  throw Error(ErrorCode::InvalidConfig, "unknown Hamiltonian '" + text + "'");
}

std::string HamiltonianSpec::name() const {
  const std::string order = std::to_string(n);
  switch (kind) {
    case HamiltonianKind::K: return "K:" + order;
    case HamiltonianKind::Kbar: return "Kbar:" + order;
    case HamiltonianKind::ReK: return "ReK:" + order;
    case HamiltonianKind::ImK: return "ImK:" + order;
    case HamiltonianKind::K0: return "K0";
    case HamiltonianKind::LogK0: return "logK0";
    case HamiltonianKind::AL: return "AL";
  }
  return "?";
}

Complex HamiltonianSpec::evaluate(const VerblunskySequence& seq) const {
  switch (kind) {
    case HamiltonianKind::K: return K_base(n, seq);
    case HamiltonianKind::Kbar: return std::conj(K_base(n, seq));
    case HamiltonianKind::ReK: return K_base(n, seq).real();
    case HamiltonianKind::ImK: return K_base(n, seq).imag();
    case HamiltonianKind::K0: return K0(seq);
    case HamiltonianKind::LogK0: return std::log(K0(seq));
    case HamiltonianKind::AL:
      return 2.0 * K_base(1, seq).real() - 2.0 * std::log(K0(seq));
  }
  return {};
}

WirtingerGradient HamiltonianSpec::gradient(const VerblunskySequence& seq,
                                            GradientMethod method,
                                            double fd_step) const {
  if (method == GradientMethod::FiniteDifference) {
    const HamiltonianSpec self = *this;
    return fd_gradient(
        [self](const VerblunskySequence& s) { return self.evaluate(s); }, seq,
        fd_step);
  }
  switch (kind) {
    case HamiltonianKind::K: return grad_K_base(n, seq);
    case HamiltonianKind::Kbar: return conjugate_gradient(grad_K_base(n, seq));
    case HamiltonianKind::ReK: {
      const auto g = grad_K_base(n, seq);
      return Complex(0.5) * (g + conjugate_gradient(g));
    }
    case HamiltonianKind::ImK: {
      const auto g = grad_K_base(n, seq);
      return (-0.5 * kI) * (g - conjugate_gradient(g));
    }
    case HamiltonianKind::K0: return grad_K0(seq);
    case HamiltonianKind::LogK0: return Complex(1.0 / K0(seq)) * grad_K0(seq);
    case HamiltonianKind::AL: {
      const auto g = grad_K_base(1, seq);
      return (g + conjugate_gradient(g)) -
             Complex(2.0 / K0(seq)) * grad_K0(seq);
    }
  }
  return {};
}

Observable HamiltonianSpec::observable(GradientMethod method) const {
  const HamiltonianSpec self = *this;
  Observable o;
  o.evaluate = [self](const VerblunskySequence& s) { return self.evaluate(s); };
  o.analytic = [self](const VerblunskySequence& s) { return self.gradient(s); };
  o.method = method;
  return o;
}

std::size_t minimal_d(std::size_t p, unsigned n) {
  if (p == 0) throw Error(ErrorCode::InvalidConfig, "empty period");
  std::size_t d = 1;
  while ((d * p) % 2 != 0 || d * p < 2 * static_cast<std::size_t>(n) + 1) ++d;
  return d;
}

Complex K_with_d(unsigned n, const VerblunskySequence& seq, std::size_t d) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  const ComplexMatrix q = build_floquet(seq, d);
  return power(q, n).trace() / static_cast<double>(d * n);
}

Complex K(unsigned n, const VerblunskySequence& seq) {
  return K_with_d(n, seq, minimal_d(seq.size(), n));
}

Complex K_from_diagonal(unsigned n, const VerblunskySequence& seq) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  const ExtendedPower ep(seq, n);
  Complex sum = 0.0;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto kk = static_cast<std::int64_t>(k);
    sum += ep.entry(kk, kk);
  }
  return sum / static_cast<double>(n);
}

Complex trace_power(unsigned m, const VerblunskySequence& seq, std::size_t d) {
  return power(build_floquet(seq, d), m).trace();
}

WirtingerGradient grad_trace_power(unsigned m, const VerblunskySequence& seq,
                                   std::size_t d) {
  if (m == 0) return WirtingerGradient::zeros(seq.size());
  const auto mo = floquet_observable(d);
  const ComplexMatrix qm = power(mo.evaluate(seq), m - 1);
  const double scale = static_cast<double>(m);
  auto g = WirtingerGradient::zeros(seq.size());
  for (std::size_t j = 0; j < seq.size(); ++j) {
    g.d_alpha[j] =
        scale * trace_of_product(mo.derivative(seq, j, Wirtinger::Alpha), qm);
    g.d_alphabar[j] =
        scale * trace_of_product(mo.derivative(seq, j, Wirtinger::AlphaBar), qm);
  }
  return g;
}

double K0(const VerblunskySequence& seq) {
  double prod = 1.0;
  for (const auto& a : seq.active_slots()) prod *= 1.0 - std::norm(a);
  return prod;
}

double K0_finite_full(const VerblunskySequence& seq) {
  double prod = 1.0;
  for (const auto& a : seq.alphas()) prod *= std::max(0.0, 1.0 - std::norm(a));
  return prod;
}

WirtingerGradient grad_K0(const VerblunskySequence& seq) {
  const auto slots = seq.active_slots();
  const double k0 = K0(seq);
  auto g = WirtingerGradient::zeros(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j) {
    const double rho2 = 1.0 - std::norm(slots[j]);
    g.d_alpha[j] = -std::conj(slots[j]) * k0 / rho2;
    g.d_alphabar[j] = -slots[j] * k0 / rho2;
  }
  return g;
}

Complex K_finite(unsigned n, const VerblunskySequence& seq) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  return power(build_finite_cmv(seq), n).trace() / static_cast<double>(n);
}

WirtingerGradient grad_K_finite(unsigned n, const VerblunskySequence& seq) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  const auto mo = finite_cmv_observable();
  const ComplexMatrix cn = power(mo.evaluate(seq), n - 1);
  const std::size_t m = seq.active_slots().size();
  auto g = WirtingerGradient::zeros(m);
  for (std::size_t j = 0; j < m; ++j) {
    g.d_alpha[j] = trace_of_product(mo.derivative(seq, j, Wirtinger::Alpha), cn);
    g.d_alphabar[j] =
        trace_of_product(mo.derivative(seq, j, Wirtinger::AlphaBar), cn);
  }
  return g;
}

std::size_t default_infinite_window(unsigned n, const VerblunskySequence& seq) {
  return even_ceil(seq.size() + 4 * static_cast<std::size_t>(n));
}

InfiniteValue K_infinite(unsigned n, const VerblunskySequence& seq,
                         std::size_t window) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  const std::size_t N = seq.size();
  const auto reach = 2 * static_cast<std::int64_t>(n);
  if (window < N + 4 * static_cast<std::size_t>(n))
    throw Error(ErrorCode::WindowTooSmall,
                "window " + std::to_string(window) + " below N + 4n = " +
                    std::to_string(N + 4 * n));
  const std::size_t size = even_ceil(window + 1 + 2 * n);
  const ComplexMatrix cn = power(build_half_line_section(seq, size), n);
  Complex sum = 0.0;
  for (std::size_t k = 0; k <= window; ++k) sum += cn(k, k);

  // At most 4^n monomials per diagonal entry, each carrying one alpha within
  // distance 2n-1 of the row.
  double tail = 0.0;
  const auto last = static_cast<std::int64_t>(N) + reach;
  for (std::int64_t j = static_cast<std::int64_t>(window) - reach + 1; j <= last;
       ++j) {
    for (std::int64_t i = j - reach + 1; i <= j + reach - 1; ++i)
      if (i >= 0) tail += std::abs(alpha_at(seq, i));
  }
  tail *= std::pow(4.0, n);
  return {sum / static_cast<double>(n), tail, window};
}

WirtingerGradient grad_K_infinite(unsigned n, const VerblunskySequence& seq,
                                  std::size_t window) {
  if (n == 0) throw Error(ErrorCode::InvalidConfig, "K_n needs n >= 1");
  const std::size_t size = even_ceil(window + 1 + 2 * n);
  const CoeffVector a = unrolled_alphas(seq, size);
  const ComplexMatrix c = build_factors(a, Closure::Open).product();
  std::vector<ComplexMatrix> powers{ComplexMatrix::identity(size)};
  for (unsigned t = 1; t < n; ++t) powers.push_back(powers.back() * c);

  const std::size_t m = seq.active_slots().size();
  auto g = WirtingerGradient::zeros(m);
  auto partial = [&](std::size_t j, Wirtinger w) {
    const ComplexMatrix dc = cmv_derivative(a, Closure::Open, j, w);
    Complex sum = 0.0;
    for (unsigned t = 0; t < n; ++t) {
      const ComplexMatrix left = powers[t] * dc;
      const ComplexMatrix& right = powers[n - 1 - t];
      for (std::size_t k = 0; k <= window; ++k)
        for (std::size_t l = 0; l < size; ++l) sum += left(k, l) * right(l, k);
    }
    return sum / static_cast<double>(n);
  };
  for (std::size_t j = 0; j < std::min(m, size); ++j) {
    g.d_alpha[j] = partial(j, Wirtinger::Alpha);
    g.d_alphabar[j] = partial(j, Wirtinger::AlphaBar);
  }
  return g;
}

std::vector<Complex> char_poly_coeffs(const ComplexMatrix& m) {
  if (!m.is_square())
    throw Error(ErrorCode::NonSquare, "characteristic polynomial of a non-square matrix");
  const std::size_t dim = m.rows();
  if (dim > kMaxCharPolyDim)
    throw Error(ErrorCode::DimensionTooLarge,
                "dimension " + std::to_string(dim) + " exceeds 256");
  std::vector<Complex> power_sums(dim + 1);
  ComplexMatrix pk = ComplexMatrix::identity(dim);
  for (std::size_t k = 1; k <= dim; ++k) {
    pk = pk * m;
    power_sums[k] = pk.trace();
  }
  // k e_k = sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
  std::vector<Complex> e(dim + 1);
  e[0] = 1.0;
  for (std::size_t k = 1; k <= dim; ++k) {
    Complex s = 0.0;
    for (std::size_t i = 1; i <= k; ++i) {
      const double sign = (i % 2 == 1) ? 1.0 : -1.0;
      s += sign * e[k - i] * power_sums[i];
    }
    e[k] = s / static_cast<double>(k);
  }
  std::vector<Complex> coeffs(dim + 1);
  for (std::size_t k = 0; k <= dim; ++k)
    coeffs[k] = (k % 2 == 0) ? e[k] : -e[k];
  return coeffs;
}

Complex discriminant(const VerblunskySequence& seq, Complex z) {
  if (z == 0.0) throw Error(ErrorCode::ZeroArgument, "Delta(0) is undefined");
  const auto coeffs = char_poly_coeffs(build_floquet(seq, 1));
  Complex det = 0.0;
  for (const auto& c : coeffs) det = det * z + c;
  const std::size_t p = seq.size();
  return det / (int_pow(z, p / 2) * rho_product(seq)) + 2.0;
}

double discriminant_period_two(Complex a, Complex a_prime, double theta) {
  return 2.0 / (rho_of(a) * rho_of(a_prime)) *
         (std::cos(theta) + (std::conj(a) * a_prime).real());
}

DiscriminantPoly discriminant_poly(const VerblunskySequence& seq) {
  DiscriminantPoly poly;
  poly.c = char_poly_coeffs(build_floquet(seq, 1));
  poly.rho_product = rho_product(seq);
  poly.k0 = K0(seq);
  poly.c[seq.size() / 2] += 2.0 * poly.rho_product;
  return poly;
}

std::vector<double> invariant_vector(const VerblunskySequence& seq) {
  const auto poly = discriminant_poly(seq);
  const std::size_t half = seq.size() / 2;
  std::vector<double> v;
  v.reserve(seq.size());
  for (std::size_t j = 1; j < half; ++j) {
    v.push_back(poly.c[j].real());
    v.push_back(poly.c[j].imag());
  }
  v.push_back(poly.c[half].real());
  v.push_back(poly.k0);
  return v;
}

}  // namespace allax
