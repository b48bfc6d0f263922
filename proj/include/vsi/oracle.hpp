#pragma once

// Brute-force achievability checkers, independent of the certificate:
//  - steady-state sweep over the disturbance interval (control at the
//    equilibrium is gain-independent),
//  - full trajectory simulation against the time-varying envelope,
//  - a sampling falsifier for certified implications.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vsi/certificate.hpp"
#include "vsi/controller.hpp"
#include "vsi/model.hpp"

namespace vsi {

/// Flagging tolerance on the ||u|| scale, relative to the constraint size.
inline double violation_tolerance(const PlantParams& params) {
  return 1e-9 * params.u_hi_v * params.vg_hi_v;
}

struct SteadyStateReport {
  bool achievable = false;
  double worst_margin_v2 = 0.0;  // min over d of min(||u||-lo, hi-||u||)
  double worst_d = 0.0;
  // Margin samples over the d grid (for reports; the verdict also checks the
  // analytic interior critical points, so it is grid-independent).
  std::vector<double> grid_d;
  std::vector<double> grid_margin_v2;
};

SteadyStateReport steady_state_achievable(const Setpoint& x_ref,
                                          const PlantParams& params,
                                          int n_grid = 1001);

/// Per-profile record of a simulated run against the envelope
/// u_lo * V_G(t) <= ||u(t)|| <= u_hi * V_G(t).
struct ConstraintTrace {
  std::string profile_label;
  std::vector<double> t_s;
  std::vector<double> p_w;
  std::vector<double> q_var;
  std::vector<double> u_p;
  std::vector<double> u_q;
  std::vector<double> vg_v;
  std::vector<double> norm_u;   // ||u_PQ|| (V^2)
  std::vector<double> lb_v2;    // u_lo * V_G(t)
  std::vector<double> ub_v2;    // u_hi * V_G(t)
  std::vector<std::uint8_t> violation;
  double worst_margin_v2 = 0.0;
  int n_violations = 0;
};

struct TrajectoryReport {
  bool achievable = false;
  double worst_margin_v2 = 0.0;
  std::vector<ConstraintTrace> traces;
};

/// Audit set: both band extremes, the midpoint, a sinusoid spanning 90% of
/// the band at 0.5 Hz, and a clamped random walk stepping at dt.
std::vector<GridProfile> default_ensemble(const PlantParams& params,
                                          double dt = kDefaultDt,
                                          std::uint64_t walk_seed = 1);

/// RK4-simulates the closed loop from x0 for every profile and flags
/// envelope violations per sample. Preconditions: stabilizing gain and
/// horizon >= 5 closed-loop time constants (throws otherwise).
TrajectoryReport trajectory_achievable(const PowerState& x0, const Setpoint& x_ref,
                                       const Gain& gain, const PlantParams& params,
                                       const std::vector<GridProfile>& ensemble,
                                       double dt = kDefaultDt,
                                       double horizon = kDefaultHorizon);

struct SampleBox {
  double d_lo = 0.0, d_hi = 0.0;
  double p_lo = 0.0, p_hi = 0.0;
  double q_lo = 0.0, q_hi = 0.0;
};

/// Searches for z with qa(z) >= 0 and qb(z) < -1e-6. Empty when no
/// counterexample is found among n_samples draws.
std::optional<Vec3> implication_counterexample(const QuadraticForm& qa,
                                               const QuadraticForm& qb,
                                               const SampleBox& box,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed);

}  // namespace vsi
