#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "allax/error.hpp"

namespace allax {

using Complex = std::complex<double>;
using CoeffVector = std::vector<Complex>;

enum class SequenceCase { Finite, Periodic, InfiniteTruncated };

std::string_view to_string(SequenceCase c);

/// Verblunsky coefficients for one of the three problem settings.
///
/// Periodic: one period is stored; odd periods are doubled on construction
/// so the stored length (the effective period) is always even.
/// Finite(k): alpha_0..alpha_{k-1} with the boundary alpha_{k-1} = -1.
/// InfiniteTruncated(N): alpha_0..alpha_{N-1}, everything beyond is zero.
class VerblunskySequence {
 public:
  /// Canonicalizes and validates; throws Error on the first violation.
  static VerblunskySequence periodic(CoeffVector alphas);
  static VerblunskySequence finite(CoeffVector alphas);
  static VerblunskySequence infinite(CoeffVector alphas);

  /// No canonicalization, no validation. Used by loaders and by tests that
  /// exercise validate() on bad input.
  static VerblunskySequence unchecked(SequenceCase c, CoeffVector alphas);

  SequenceCase sequence_case() const noexcept { return case_; }
  const CoeffVector& alphas() const noexcept { return alphas_; }
  std::size_t size() const noexcept { return alphas_.size(); }

  /// Periodic only: the even period the downstream code works with.
  std::size_t effective_period() const;

  /// The coefficient slots that are dynamical variables of the bracket:
  /// the whole period, alpha_0..alpha_{k-2} for Finite, all N stored slots
  /// for InfiniteTruncated.
  std::span<const Complex> active_slots() const;

 private:
  VerblunskySequence(SequenceCase c, CoeffVector alphas)
      : case_(c), alphas_(std::move(alphas)) {}

  SequenceCase case_;
  CoeffVector alphas_;
};

struct ValidationReport {
  std::optional<Error> error;
  /// Non-fatal: slots whose modulus is within 1e-12 of the unit circle.
  std::vector<std::int64_t> near_boundary;

  bool ok() const noexcept { return !error.has_value(); }
};

ValidationReport validate(const VerblunskySequence& seq);

/// alpha_j with the case's boundary conventions: periodic wraparound for any
/// integer j; alpha_{-1} = -1 for Finite; alpha_{-1} = 0 and a zero tail for
/// InfiniteTruncated.
Complex alpha_at(const VerblunskySequence& seq, std::int64_t j);

/// sqrt(1 - |alpha_j|^2), clamped at 0 for unimodular boundary values.
double rho_at(const VerblunskySequence& seq, std::int64_t j);

inline double rho_of(Complex alpha) {
  const double r2 = 1.0 - std::norm(alpha);
  return r2 > 0.0 ? std::sqrt(r2) : 0.0;
}

/// p even: unchanged. p odd: the period is repeated once.
CoeffVector canonicalize_period(std::span<const Complex> period);

/// Floor modulus for possibly negative indices.
inline std::int64_t wrap_index(std::int64_t j, std::int64_t period) {
  const std::int64_t r = j % period;
  return r < 0 ? r + period : r;
}

// JSON coefficient files: {"case": "periodic"|"finite"|"infinite",
// "alphas": [[re, im], ...]}

VerblunskySequence parse_coefficients(const std::string& json_text);
VerblunskySequence load_coefficients(const std::filesystem::path& path);
std::string dump_coefficients(const VerblunskySequence& seq);

/// Random coefficient with |alpha|^2 uniform on [0, max_modulus^2] and
/// uniform phase.
Complex random_alpha(std::mt19937_64& rng, double max_modulus = 0.9);
/// Real coefficient with |alpha|^2 uniform on [0, max_modulus^2], random sign.
Complex random_real_alpha(std::mt19937_64& rng, double max_modulus = 0.9);
CoeffVector random_period(std::size_t p, std::mt19937_64& rng,
                          double max_modulus = 0.9);

}  // namespace allax
