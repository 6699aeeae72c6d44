#include "allax/cmv.hpp"

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <string>

namespace allax {

namespace {

constexpr double kThetaSlack = 1e-12;
constexpr double kRhoFloor = 1e-9;

std::int64_t even_floor(std::int64_t j) { return j - wrap_index(j, 2); }
std::int64_t odd_floor(std::int64_t j) { return even_floor(j - 1) + 1; }

// Writes the (r, c) entries of a 2x2 block for position q, or its 1x1
// remainder when the block falls off an open end.
template <typename EntryFn>
void place_block(ComplexMatrix& mat, std::size_t q, Closure closure,
                 EntryFn entry) {
  const std::size_t n = mat.rows();
  if (q + 1 < n) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) mat(q + r, q + c) = entry(r, c);
    return;
  }
  if (closure == Closure::Periodic) {
    const std::size_t idx[2] = {q, 0};
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) mat(idx[r], idx[c]) = entry(r, c);
    return;
  }
  mat(q, q) = entry(0, 0);
}

void require_periodic_layout(std::size_t n, Closure closure) {
  if (closure == Closure::Periodic && (n == 0 || n % 2 != 0))
    throw Error(ErrorCode::OddPeriodNotCanonicalized,
                "periodic closure needs an even size, got " +
                    std::to_string(n));
}

}  // namespace

Complex ThetaBlock::operator()(int r, int c) const {
  if (r == 0 && c == 0) return std::conj(alpha);
  if (r == 1 && c == 1) return -alpha;
  return rho;
}

ComplexMatrix ThetaBlock::matrix() const {
  return ComplexMatrix::from_rows(
      {{(*this)(0, 0), (*this)(0, 1)}, {(*this)(1, 0), (*this)(1, 1)}});
}

ThetaBlock make_theta(Complex alpha) {
  if (!(std::abs(alpha) <= 1.0 + kThetaSlack))
    throw Error(ErrorCode::ModulusOutOfRange, "|alpha| > 1 in Theta block");
  return ThetaBlock{alpha, rho_of(alpha)};
}

Complex theta_derivative(Complex alpha, int r, int c, Wirtinger w) {
  const double rho = rho_of(alpha);
  const bool diag = r == c;
  if (w == Wirtinger::Alpha) {
    if (diag) return r == 0 ? Complex(0.0) : Complex(-1.0);
    if (rho < kRhoFloor)
      throw Error(ErrorCode::RhoDegenerate, "rho below 1e-9 in derivative");
    return -std::conj(alpha) / (2.0 * rho);
  }
  if (diag) return r == 0 ? Complex(1.0) : Complex(0.0);
  if (rho < kRhoFloor)
    throw Error(ErrorCode::RhoDegenerate, "rho below 1e-9 in derivative");
  return -alpha / (2.0 * rho);
}

CmvFactors build_factors(std::span<const Complex> alphas, Closure closure) {
  const std::size_t n = alphas.size();
  require_periodic_layout(n, closure);
  CmvFactors f{ComplexMatrix(n, n), ComplexMatrix(n, n)};
  if (closure == Closure::Open && n > 0) f.M(0, 0) = 1.0;
  for (std::size_t q = 0; q < n; ++q) {
    const ThetaBlock t = make_theta(alphas[q]);
    place_block(q % 2 == 0 ? f.L : f.M, q, closure,
                [&](int r, int c) { return t(r, c); });
  }
  return f;
}

ComplexMatrix cmv_derivative(std::span<const Complex> alphas, Closure closure,
                             std::size_t q, Wirtinger w) {
  const std::size_t n = alphas.size();
  if (q >= n)
    throw Error(ErrorCode::IndexOutOfDomain, "derivative slot out of range",
                static_cast<std::int64_t>(q));
  CmvFactors f = build_factors(alphas, closure);
  ComplexMatrix d(n, n);
  const bool lone = closure == Closure::Open && q + 1 == n;
  if (lone) {
    d(q, q) = w == Wirtinger::AlphaBar ? 1.0 : 0.0;
  } else {
    place_block(d, q, closure, [&](int r, int c) {
      return theta_derivative(alphas[q], r, c, w);
    });
  }
  return q % 2 == 0 ? d * f.M : f.L * d;
}

CmvFactors build_finite_factors(const VerblunskySequence& seq) {
  return build_factors(seq.alphas(), Closure::Open);
}

ComplexMatrix build_finite_cmv(const VerblunskySequence& seq) {
  return build_finite_factors(seq).product();
}

CoeffVector unrolled_alphas(const VerblunskySequence& seq, std::size_t size) {
  CoeffVector out(size);
  for (std::size_t j = 0; j < size; ++j)
    out[j] = alpha_at(seq, static_cast<std::int64_t>(j));
  return out;
}

ComplexMatrix build_floquet(const VerblunskySequence& seq, std::size_t d) {
  if (d == 0) throw Error(ErrorCode::InvalidConfig, "d must be positive");
  const std::size_t p = seq.size();
  CoeffVector a(d * p);
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = seq.alphas()[j % p];
  return build_factors(a, Closure::Periodic).product();
}

ComplexMatrix build_half_line_section(const VerblunskySequence& seq,
                                      std::size_t size) {
  return build_factors(unrolled_alphas(seq, size), Closure::Open).product();
}

ExtendedCmvOracle::ExtendedCmvOracle(const VerblunskySequence& seq) {
  const std::size_t p = seq.size();
  require_periodic_layout(p, Closure::Periodic);
  thetas_.reserve(p);
  for (const auto& a : seq.alphas()) thetas_.push_back(make_theta(a));
}

const ThetaBlock& ExtendedCmvOracle::theta(std::int64_t q) const {
  return thetas_[static_cast<std::size_t>(
      wrap_index(q, static_cast<std::int64_t>(thetas_.size())))];
}

Complex ExtendedCmvOracle::l_entry(std::int64_t j, std::int64_t m) const {
  const std::int64_t s = even_floor(j);
  if (m != s && m != s + 1) return 0.0;
  return theta(s)(static_cast<int>(j - s), static_cast<int>(m - s));
}

Complex ExtendedCmvOracle::m_entry(std::int64_t m, std::int64_t k) const {
  const std::int64_t s = odd_floor(m);
  if (k != s && k != s + 1) return 0.0;
  return theta(s)(static_cast<int>(m - s), static_cast<int>(k - s));
}

Complex ExtendedCmvOracle::entry(std::int64_t j, std::int64_t k) const {
  const std::int64_t s = even_floor(j);
  return l_entry(j, s) * m_entry(s, k) + l_entry(j, s + 1) * m_entry(s + 1, k);
}

ComplexMatrix ExtendedCmvOracle::window(std::int64_t first,
                                        std::size_t size) const {
  ComplexMatrix w(size, size);
  for (std::size_t r = 0; r < size; ++r)
    for (std::size_t c = 0; c < size; ++c)
      w(r, c) = entry(first + static_cast<std::int64_t>(r),
                      first + static_cast<std::int64_t>(c));
  return w;
}

Complex extended_entry(const ExtendedCmvOracle& oracle, std::int64_t j,
                       std::int64_t k) {
  return oracle.entry(j, k);
}

ComplexMatrix floquet_via_sum(const VerblunskySequence& seq, std::size_t d) {
  const ExtendedCmvOracle oracle(seq);
  const auto dp = static_cast<std::int64_t>(d * seq.size());
  ComplexMatrix q(d * seq.size(), d * seq.size());
  for (std::int64_t j = 0; j < dp; ++j) {
    for (std::int64_t k = 0; k < dp; ++k) {
      Complex sum = 0.0;
      for (std::int64_t l = -2; l <= 2; ++l) {
        const std::int64_t kk = k + l * dp;
        if (std::abs(j - kk) <= 2) sum += oracle.entry(j, kk);
      }
      q(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = sum;
    }
  }
  return q;
}

ExtendedPower::ExtendedPower(const VerblunskySequence& seq, unsigned n)
    : n_(n) {
  const std::size_t p = seq.size();
  require_periodic_layout(p, Closure::Periodic);
  std::size_t d = 1;
  while (d * p < 4 * static_cast<std::size_t>(n) + 2) ++d;
  size_ = static_cast<std::int64_t>(d * p);
  power_ = power(build_floquet(seq, d), n);
}

Complex ExtendedPower::entry(std::int64_t j, std::int64_t k) const {
  if (std::abs(j - k) > 2 * static_cast<std::int64_t>(n_)) return 0.0;
  return power_(static_cast<std::size_t>(wrap_index(j, size_)),
                static_cast<std::size_t>(wrap_index(k, size_)));
}

ComplexMatrix ExtendedPower::restricted_plus(std::size_t dp) const {
  const auto m = static_cast<std::int64_t>(dp);
  const auto reach = 2 * static_cast<std::int64_t>(n_);
  ComplexMatrix r(dp, dp);
  for (std::int64_t a = 0; a < m; ++a) {
    for (std::int64_t b = 0; b < m; ++b) {
      Complex sum = 0.0;
      // Every k = b + l*dp with a <= k <= a + reach.
      std::int64_t k = b + m * ((a - b) / m - 1);
      for (; k <= a + reach; k += m) {
        if (k < a) continue;
        const Complex e = entry(a, k);
        sum += k == a ? 0.5 * e : e;
      }
      r(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = sum;
    }
  }
  return r;
}

ComplexMatrix plus_projection(const ComplexMatrix& m) {
  if (!m.is_square())
    throw Error(ErrorCode::NonSquare, "plus projection of a non-square matrix");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out(i, i) = 0.5 * m(i, i);
    for (std::size_t j = i + 1; j < m.cols(); ++j) out(i, j) = m(i, j);
  }
  return out;
}

ComplexMatrix build_p_matrix(const VerblunskySequence& seq, std::size_t size) {
  double k0 = 1.0;
  for (const auto& a : seq.alphas()) k0 *= 1.0 - std::norm(a);
  ComplexMatrix p(size, size);
  for (std::size_t l = 0; l < size; ++l)
    p(l, l) = Complex(0.0, l % 2 == 0 ? 0.5 * k0 : -0.5 * k0);
  return p;
}

bool outside_band(std::int64_t j, std::int64_t k, unsigned n) {
  const std::int64_t delta = j - k;
  const auto reach = 2 * static_cast<std::int64_t>(n);
  if (std::abs(delta) > reach) return true;
  if (n == 0) return false;
  const bool both_even = wrap_index(j, 2) == 0 && wrap_index(k, 2) == 0;
  const bool both_odd = wrap_index(j, 2) == 1 && wrap_index(k, 2) == 1;
  return (delta == reach && both_even) || (delta == -reach && both_odd);
}

std::vector<BandViolation> band_shape_check(const ComplexMatrix& mn, unsigned n,
                                            BandGeometry geometry,
                                            std::int64_t origin) {
  if (!mn.is_square())
    throw Error(ErrorCode::NonSquare, "band check on a non-square matrix");
  const auto m = static_cast<std::int64_t>(mn.rows());
  if (geometry == BandGeometry::Cyclic && m < 4 * static_cast<std::int64_t>(n) + 2)
    throw Error(ErrorCode::WindowTooSmall,
                "cyclic band check needs size >= 4n+2, got " +
                    std::to_string(m));
  std::vector<BandViolation> out;
  for (std::int64_t r = 0; r < m; ++r) {
    for (std::int64_t c = 0; c < m; ++c) {
      std::int64_t j = origin + r;
      std::int64_t k = origin + c;
      if (geometry == BandGeometry::Cyclic) {
        // Bring the column to the representative nearest the row.
        std::int64_t delta = wrap_index(r - c, m);
        if (delta > m / 2) delta -= m;
        j = r;
        k = r - delta;
        if (wrap_index(k, 2) != wrap_index(c, 2))
          throw Error(ErrorCode::InvalidConfig, "cyclic band check needs even size");
      }
      if (!outside_band(j, k, n)) continue;
      const double mag =
          std::abs(mn(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
      if (mag > kStructuralZero)
        out.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), mag});
    }
  }
  return out;
}

void write_matrix_csv(std::ostream& out, const ComplexMatrix& m) {
  out << "row,col,re,im\n";
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (std::abs(m(i, j)) > kStructuralZero)
        out << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag()
            << '\n';
  out.precision(old_precision);
}

}  // namespace allax
