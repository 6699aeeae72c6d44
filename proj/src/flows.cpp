#include "allax/flows.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "allax/cmv.hpp"

namespace allax {

namespace {

constexpr double kDiskRadius = 1.0 - 1e-9;
constexpr int kMaxHalvings = 20;
const Complex kI(0.0, 1.0);

bool inside(const CoeffVector& s) {
  for (const auto& a : s)
    if (!(std::abs(a) < kDiskRadius)) return false;
  return true;
}

CoeffVector axpy(const CoeffVector& x, double h, const CoeffVector& k) {
  CoeffVector out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + h * k[j];
  return out;
}

struct Stepper {
  const FlowConfig& config;
  const VerblunskySequence& shape;

  CoeffVector field(const CoeffVector& s) const {
    return vector_field(config.hamiltonian, with_active_slots(shape, s),
                        config.gradient_method);
  }

  // One RK4 step; false if some stage leaves the disk.
  bool rk4(const CoeffVector& s, double h, CoeffVector& out) const {
    const CoeffVector k1 = field(s);
    const CoeffVector s2 = axpy(s, 0.5 * h, k1);
    if (!inside(s2)) return false;
    const CoeffVector k2 = field(s2);
    const CoeffVector s3 = axpy(s, 0.5 * h, k2);
    if (!inside(s3)) return false;
    const CoeffVector k3 = field(s3);
    const CoeffVector s4 = axpy(s, h, k3);
    if (!inside(s4)) return false;
    const CoeffVector k4 = field(s4);
    out.resize(s.size());
    for (std::size_t j = 0; j < s.size(); ++j)
      out[j] = s[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    return inside(out);
  }

  // Advances by h, splitting into 2^level substeps when needed.
  CoeffVector advance(const CoeffVector& s, double h, double t) const {
    for (int level = 0; level <= kMaxHalvings; ++level) {
      const std::size_t pieces = std::size_t{1} << level;
      const double sub = h / static_cast<double>(pieces);
      CoeffVector cur = s;
      bool ok = true;
      for (std::size_t i = 0; i < pieces && ok; ++i) {
        CoeffVector next;
        ok = rk4(cur, sub, next);
        cur = std::move(next);
      }
      if (ok) return cur;
    }
    throw Error(ErrorCode::StepRejected,
                "step at t = " + std::to_string(t) +
                    " leaves the disk after 20 halvings");
  }
};

}  // namespace

CoeffVector vector_field(const HamiltonianSpec& h, const VerblunskySequence& seq,
                         GradientMethod method) {
  const WirtingerGradient g = h.gradient(seq, method);
  const auto slots = seq.active_slots();
  CoeffVector v(slots.size());
  for (std::size_t j = 0; j < slots.size(); ++j)
    v[j] = -kI * (1.0 - std::norm(slots[j])) * g.d_alphabar[j];
  return v;
}

VerblunskySequence with_active_slots(const VerblunskySequence& seq,
                                     const CoeffVector& slots) {
  CoeffVector a = slots;
  if (seq.sequence_case() == SequenceCase::Finite) a.push_back(seq.alphas().back());
  return VerblunskySequence::unchecked(seq.sequence_case(), std::move(a));
}

std::map<std::string, double> compute_monitors(const VerblunskySequence& seq) {
  std::map<std::string, double> m;
  m["K0"] = K0(seq);
  for (unsigned n = 1; n <= 3; ++n) {
    const Complex k = HamiltonianSpec{HamiltonianKind::K, n}.evaluate(seq);
    m["ReK" + std::to_string(n)] = k.real();
    m["ImK" + std::to_string(n)] = k.imag();
  }
  double maxmod = 0.0;
  for (const auto& a : seq.active_slots()) maxmod = std::max(maxmod, std::abs(a));
  m["maxmod"] = maxmod;

  switch (seq.sequence_case()) {
    case SequenceCase::Periodic: {
      const ComplexMatrix q = build_floquet(seq, 1);
      m["unitarity"] = unitarity_defect(q);
      const auto c = char_poly_coeffs(q);
      for (std::size_t j = 1; j < c.size(); ++j) {
        m["cpoly" + std::to_string(j) + "_re"] = c[j].real();
        m["cpoly" + std::to_string(j) + "_im"] = c[j].imag();
      }
      const auto inv = invariant_vector(seq);
      for (std::size_t j = 0; j < inv.size(); ++j)
        m["inv" + std::to_string(j)] = inv[j];
      break;
    }
    case SequenceCase::Finite:
      m["unitarity"] = unitarity_defect(build_finite_cmv(seq));
      break;
    case SequenceCase::InfiniteTruncated:
      m["unitarity"] = unitarity_defect(
          build_half_line_section(seq, seq.size() + seq.size() % 2));
      break;
  }
  return m;
}

std::vector<TrajectoryRecord> integrate(const FlowConfig& config,
                                        const VerblunskySequence& seq) {
  if (!(config.dt > 0.0) || !(config.t_end >= 0.0) || config.monitor_every == 0)
    throw Error(ErrorCode::InvalidConfig, "need dt > 0, t_end >= 0, monitor_every > 0");
  if (!config.hamiltonian.is_real_valued())
    throw Error(ErrorCode::InvalidConfig,
                config.hamiltonian.name() +
                    " is complex-valued; integrate ReK:n or ImK:n instead");
  const auto slots = seq.active_slots();
  CoeffVector state(slots.begin(), slots.end());
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (!(std::abs(state[j]) < kDiskRadius))
      throw Error(ErrorCode::DiskExit,
                  "t = 0: |alpha_" + std::to_string(j) + "| >= 1 - 1e-9",
                  static_cast<std::int64_t>(j));
  }

  const auto steps =
      static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
  const double h = steps == 0 ? 0.0 : config.t_end / static_cast<double>(steps);
  const double sign = config.backward ? -1.0 : 1.0;
  const Stepper stepper{config, seq};

  std::vector<TrajectoryRecord> traj;
  auto record = [&](double t) {
    const VerblunskySequence cur = with_active_slots(seq, state);
    traj.push_back({t, cur.alphas(), compute_monitors(cur)});
  };
  record(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t_prev = sign * h * static_cast<double>(i - 1);
    state = stepper.advance(state, sign * h, t_prev);
    if (i % config.monitor_every == 0 || i == steps)
      record(sign * h * static_cast<double>(i));
  }
  return traj;
}

std::map<std::string, double> drift_report(
    const std::vector<TrajectoryRecord>& traj) {
  if (traj.empty())
    throw Error(ErrorCode::InvalidConfig, "drift of an empty trajectory");
  std::map<std::string, double> drift;
  const auto& first = traj.front().monitors;
  for (const auto& [name, v0] : first) drift[name] = 0.0;
  for (const auto& rec : traj) {
    for (const auto& [name, v] : rec.monitors) {
      const auto it = first.find(name);
      if (it == first.end()) continue;
      drift[name] = std::max(drift[name], std::abs(v - it->second));
    }
  }
  return drift;
}

double max_drift(const std::map<std::string, double>& drifts,
                 const std::vector<std::string>& prefixes) {
  double m = 0.0;
  for (const auto& [name, v] : drifts)
    for (const auto& p : prefixes)
      if (name.rfind(p, 0) == 0) m = std::max(m, v);
  return m;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryRecord>& traj) {
  const std::size_t width = traj.empty() ? 0 : traj.front().alphas.size();
  out << "t";
  for (std::size_t j = 0; j < width; ++j)
    out << ",alpha" << j << "_re,alpha" << j << "_im";
  static const char* kColumns[] = {"K0",   "ReK1", "ImK1",      "ReK2",
                                   "ImK2", "unitarity", "maxmod"};
  for (const char* c : kColumns) out << ',' << c;
  out << '\n';
  const auto old_precision = out.precision();
  out << std::setprecision(17);
  for (const auto& rec : traj) {
    out << rec.t;
    for (const auto& a : rec.alphas) out << ',' << a.real() << ',' << a.imag();
    for (const char* c : kColumns) out << ',' << rec.monitors.at(c);
    out << '\n';
  }
  out.precision(old_precision);
}

OrderCheck order_check(FlowConfig config, const VerblunskySequence& seq,
                       const std::vector<std::string>& prefixes) {
  OrderCheck r;
  r.dt_coarse = config.dt;
  r.drift_coarse = max_drift(drift_report(integrate(config, seq)), prefixes);
  config.dt *= 0.5;
  config.monitor_every *= 2;
  r.drift_fine = max_drift(drift_report(integrate(config, seq)), prefixes);
  r.ratio = r.drift_fine > 0.0 ? r.drift_coarse / r.drift_fine
                               : std::numeric_limits<double>::infinity();
  r.observed_order = std::log2(r.ratio);
  return r;
}

}  // namespace allax
