#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "allax/coeffs.hpp"
#include "allax/hamiltonians.hpp"
#include "allax/poisson.hpp"

namespace allax {

struct FlowConfig {
  HamiltonianSpec hamiltonian;
  double t_end = 1.0;
  double dt = 1e-3;
  std::size_t monitor_every = 1;
  GradientMethod gradient_method = GradientMethod::Analytic;
  /// Integrate towards -t_end instead of +t_end.
  bool backward = false;
};

struct TrajectoryRecord {
  double t = 0.0;
  CoeffVector alphas;
  /// Real-valued monitors keyed by name (K0, ReK1, ..., unitarity, maxmod,
  /// and for periodic data cpoly{j}_re/im and inv{j}).
  std::map<std::string, double> monitors;
};

/// Velocity of every active slot: alpha_j' = {alpha_j, H}
/// = -i rho_j^2 dH/dalphabar_j.
CoeffVector vector_field(const HamiltonianSpec& h, const VerblunskySequence& seq,
                         GradientMethod method = GradientMethod::Analytic);

/// Rebuilds a sequence of the same case with new active slot values.
VerblunskySequence with_active_slots(const VerblunskySequence& seq,
                                     const CoeffVector& slots);

std::map<std::string, double> compute_monitors(const VerblunskySequence& seq);

/// Classical RK4 with n = ceil(t_end/dt) equal steps. A stage that leaves
/// the disk of radius 1 - 1e-9 is retried with the step halved, at most 20
/// times (StepRejected afterwards). DiskExit if the initial state is
/// outside that disk. InvalidConfig for complex generators (K, Kbar): the
/// field {alpha_j, K} then mixes two flows with a factor i and is not
/// Hamiltonian.
std::vector<TrajectoryRecord> integrate(const FlowConfig& config,
                                        const VerblunskySequence& seq);

/// Per-monitor max |value(t) - value(0)|.
std::map<std::string, double> drift_report(
    const std::vector<TrajectoryRecord>& traj);

/// Largest drift among monitors whose name starts with one of `prefixes`.
double max_drift(const std::map<std::string, double>& drifts,
                 const std::vector<std::string>& prefixes);

/// Columns t, alpha{j}_re, alpha{j}_im, K0, ReK1, ImK1, ReK2, ImK2,
/// unitarity, maxmod.
void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryRecord>& traj);

struct OrderCheck {
  double dt_coarse = 0.0;
  double drift_coarse = 0.0;
  double drift_fine = 0.0;
  double ratio = 0.0;
  double observed_order = 0.0;
};

/// Drift at dt and dt/2 over the conserved monitors named by `prefixes`.
OrderCheck order_check(FlowConfig config, const VerblunskySequence& seq,
                       const std::vector<std::string>& prefixes);

}  // namespace allax
