#include "allax/coeffs.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace allax {

namespace {

constexpr double kNearBoundary = 1e-12;

void throw_if_invalid(const VerblunskySequence& seq) {
  auto report = validate(seq);
  if (report.error) throw *report.error;
}

}  // namespace

std::string_view to_string(SequenceCase c) {
  switch (c) {
    case SequenceCase::Finite: return "finite";
    case SequenceCase::Periodic: return "periodic";
    case SequenceCase::InfiniteTruncated: return "infinite";
  }
  return "unknown";
}

VerblunskySequence VerblunskySequence::periodic(CoeffVector alphas) {
  if (alphas.empty())
    throw Error(ErrorCode::InvalidConfig, "periodic sequence needs p >= 1");
  VerblunskySequence seq(SequenceCase::Periodic,
                         canonicalize_period(alphas));
  throw_if_invalid(seq);
  return seq;
}

VerblunskySequence VerblunskySequence::finite(CoeffVector alphas) {
  if (alphas.size() < 2)
    throw Error(ErrorCode::InvalidConfig, "finite sequence needs k >= 2");
  VerblunskySequence seq(SequenceCase::Finite, std::move(alphas));
  throw_if_invalid(seq);
  return seq;
}

VerblunskySequence VerblunskySequence::infinite(CoeffVector alphas) {
  VerblunskySequence seq(SequenceCase::InfiniteTruncated, std::move(alphas));
  throw_if_invalid(seq);
  return seq;
}

VerblunskySequence VerblunskySequence::unchecked(SequenceCase c,
                                                 CoeffVector alphas) {
  return VerblunskySequence(c, std::move(alphas));
}

std::size_t VerblunskySequence::effective_period() const {
  if (case_ != SequenceCase::Periodic)
    throw Error(ErrorCode::InvalidConfig,
                "effective_period requested for a non-periodic sequence");
  return alphas_.size();
}

std::span<const Complex> VerblunskySequence::active_slots() const {
  std::span<const Complex> all(alphas_);
  if (case_ == SequenceCase::Finite) return all.first(alphas_.size() - 1);
  return all;
}

ValidationReport validate(const VerblunskySequence& seq) {
  ValidationReport report;
  const auto& a = seq.alphas();
  const std::size_t interior =
      seq.sequence_case() == SequenceCase::Finite && !a.empty() ? a.size() - 1
                                                                 : a.size();
  for (std::size_t j = 0; j < interior; ++j) {
    const double mod = std::abs(a[j]);
    if (!std::isfinite(mod) || mod >= 1.0) {
      report.error = Error(ErrorCode::ModulusOutOfRange,
                           "|alpha_" + std::to_string(j) + "| >= 1",
                           static_cast<std::int64_t>(j));
      return report;
    }
    if (1.0 - mod < kNearBoundary)
      report.near_boundary.push_back(static_cast<std::int64_t>(j));
  }
  switch (seq.sequence_case()) {
    case SequenceCase::Finite:
      if (a.size() < 2) {
        report.error = Error(ErrorCode::InvalidConfig, "finite k < 2");
      } else if (a.back() != Complex(-1.0, 0.0)) {
        report.error =
            Error(ErrorCode::BadBoundaryPhase, "alpha_{k-1} must be -1",
                  static_cast<std::int64_t>(a.size() - 1));
      }
      break;
    case SequenceCase::Periodic:
      if (a.empty()) {
        report.error = Error(ErrorCode::InvalidConfig, "empty period");
      } else if (a.size() % 2 != 0) {
        report.error = Error(ErrorCode::OddPeriodNotCanonicalized,
                             "stored period " + std::to_string(a.size()) +
                                 " is odd");
      }
      break;
    case SequenceCase::InfiniteTruncated:
      break;
  }
  return report;
}

Complex alpha_at(const VerblunskySequence& seq, std::int64_t j) {
  const auto& a = seq.alphas();
  const auto n = static_cast<std::int64_t>(a.size());
  switch (seq.sequence_case()) {
    case SequenceCase::Periodic:
      return a[static_cast<std::size_t>(wrap_index(j, n))];
    case SequenceCase::Finite:
      if (j == -1) return Complex(-1.0, 0.0);
      if (j < -1 || j >= n)
        throw Error(ErrorCode::IndexOutOfDomain,
                    "finite index " + std::to_string(j) + " outside [-1, k)",
                    j);
      return a[static_cast<std::size_t>(j)];
    case SequenceCase::InfiniteTruncated:
      if (j < -1)
        throw Error(ErrorCode::IndexOutOfDomain,
                    "half-line index " + std::to_string(j) + " below -1", j);
      if (j == -1 || j >= n) return Complex(0.0, 0.0);
      return a[static_cast<std::size_t>(j)];
  }
  return {};
}

double rho_at(const VerblunskySequence& seq, std::int64_t j) {
  return rho_of(alpha_at(seq, j));
}

CoeffVector canonicalize_period(std::span<const Complex> period) {
  CoeffVector out(period.begin(), period.end());
  if (out.size() % 2 != 0) out.insert(out.end(), period.begin(), period.end());
  return out;
}

VerblunskySequence parse_coefficients(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("case") || !doc.contains("alphas"))
    throw Error(ErrorCode::ParseError,
                "expected an object with \"case\" and \"alphas\"");
  if (!doc["case"].is_string() || !doc["alphas"].is_array())
    throw Error(ErrorCode::ParseError, "bad \"case\" or \"alphas\" type");

  CoeffVector alphas;
  for (const auto& entry : doc["alphas"]) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
        !entry[1].is_number())
      throw Error(ErrorCode::ParseError, "each alpha must be [re, im]");
    alphas.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }

  const auto kind = doc["case"].get<std::string>();
  if (kind == "periodic") return VerblunskySequence::periodic(std::move(alphas));
  if (kind == "finite") return VerblunskySequence::finite(std::move(alphas));
  if (kind == "infinite") return VerblunskySequence::infinite(std::move(alphas));
  throw Error(ErrorCode::ParseError, "unknown case \"" + kind + "\"");
}

VerblunskySequence load_coefficients(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidConfig, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_coefficients(buf.str());
}

std::string dump_coefficients(const VerblunskySequence& seq) {
  nlohmann::json doc;
  doc["case"] = std::string(to_string(seq.sequence_case()));
  auto arr = nlohmann::json::array();
  for (const auto& a : seq.alphas()) arr.push_back({a.real(), a.imag()});
  doc["alphas"] = std::move(arr);
  return doc.dump();
}

Complex random_alpha(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = std::sqrt(unit(rng)) * max_modulus;
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  return std::polar(r, phase);
}

Complex random_real_alpha(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = std::sqrt(unit(rng)) * max_modulus;
  return {unit(rng) < 0.5 ? -r : r, 0.0};
}

CoeffVector random_period(std::size_t p, std::mt19937_64& rng,
                          double max_modulus) {
  CoeffVector out(p);
  for (auto& a : out) a = random_alpha(rng, max_modulus);
  return out;
}

}  // namespace allax
