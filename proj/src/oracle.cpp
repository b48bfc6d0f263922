#include "vsi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vsi/rng.hpp"

namespace vsi {

namespace {

// Margin of the steady-state control at disturbance d, on the ||u|| scale.
double steady_margin(const Vec2& v, double d, const PlantParams& params) {
  const double norm_u = std::hypot(v.x + d, v.y);
  const double root_d = std::sqrt(d);
  const double lo = params.u_lo_v * root_d;
  const double hi = params.u_hi_v * root_d;
  return std::min(norm_u - lo, hi - norm_u);
}

}  // namespace

SteadyStateReport steady_state_achievable(const Setpoint& x_ref,
                                          const PlantParams& params, int n_grid) {
  if (n_grid < 2) throw std::invalid_argument("steady_state_achievable: n_grid >= 2");
  const PlantMatrices pm = plant_matrices(params);
  // At the equilibrium u = -B^{-1}A x_ref - B^{-1}E d = v + [d, 0].
  const Vec2 v = -(pm.binv_a * x_ref.vec());
  const double d_lo = params.d_lo();
  const double d_hi = params.d_hi();

  SteadyStateReport rep;
  rep.worst_margin_v2 = std::numeric_limits<double>::infinity();

  const auto consider = [&](double d, bool record) {
    const double m = steady_margin(v, d, params);
    if (record) {
      rep.grid_d.push_back(d);
      rep.grid_margin_v2.push_back(m);
    }
    if (m < rep.worst_margin_v2) {
      rep.worst_margin_v2 = m;
      rep.worst_d = d;
    }
  };

  for (int i = 0; i < n_grid; ++i) {
    const double d = d_lo + (d_hi - d_lo) * static_cast<double>(i) / (n_grid - 1);
    consider(d, true);
  }
  // ||u(d)||^2 - bound^2 is quadratic in d with linear bound^2, so each
  // margin function has one interior critical point: d* = U^2/2 - v1.
  const double crit_lo = 0.5 * params.u_lo_v * params.u_lo_v - v.x;
  const double crit_hi = 0.5 * params.u_hi_v * params.u_hi_v - v.x;
  if (crit_lo > d_lo && crit_lo < d_hi) consider(crit_lo, false);
  if (crit_hi > d_lo && crit_hi < d_hi) consider(crit_hi, false);

  rep.achievable = rep.worst_margin_v2 >= 0.0;
  return rep;
}

std::vector<GridProfile> default_ensemble(const PlantParams& params, double dt,
                                          std::uint64_t walk_seed) {
  const double lo = params.vg_lo_v;
  const double hi = params.vg_hi_v;
  const double mid = 0.5 * (lo + hi);
  std::vector<GridProfile> out;
  out.push_back(GridProfile::constant(lo, lo, hi, "constant_lo"));
  out.push_back(GridProfile::constant(hi, lo, hi, "constant_hi"));
  out.push_back(GridProfile::constant(mid, lo, hi, "constant_mid"));
  out.push_back(GridProfile::sinusoid(mid, 0.45 * (hi - lo), 2.0, lo, hi, "sinusoid"));
  out.push_back(GridProfile::random_walk(0.1, dt, walk_seed, lo, hi, "random_walk"));
  return out;
}

TrajectoryReport trajectory_achievable(const PowerState& x0, const Setpoint& x_ref,
                                       const Gain& gain, const PlantParams& params,
                                       const std::vector<GridProfile>& ensemble,
                                       double dt, double horizon) {
  if (ensemble.empty())
    throw std::invalid_argument("trajectory_achievable: empty profile ensemble");
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("trajectory_achievable: need dt > 0 and horizon > 0");
  const PlantMatrices pm = plant_matrices(params);
  const StabilityReport stab = stability(gain, pm);
  if (!stab.stabilizing)
    throw std::invalid_argument("trajectory_achievable: gain is not stabilizing");
  if (horizon < 5.0 * stab.time_constant())
    throw std::invalid_argument(
        "trajectory_achievable: horizon shorter than 5 closed-loop time constants");

  const double tol = violation_tolerance(params);
  const auto n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
  const FeedbackLaw law{x_ref, gain, &pm};

  TrajectoryReport rep;
  rep.achievable = true;
  rep.worst_margin_v2 = std::numeric_limits<double>::infinity();

  for (const GridProfile& profile : ensemble) {
    ConstraintTrace trace;
    trace.profile_label = profile.label();
    trace.worst_margin_v2 = std::numeric_limits<double>::infinity();
    const std::size_t n_rows = n_steps + 1;
    trace.t_s.reserve(n_rows);
    trace.p_w.reserve(n_rows);
    trace.q_var.reserve(n_rows);
    trace.u_p.reserve(n_rows);
    trace.u_q.reserve(n_rows);
    trace.vg_v.reserve(n_rows);
    trace.norm_u.reserve(n_rows);
    trace.lb_v2.reserve(n_rows);
    trace.ub_v2.reserve(n_rows);
    trace.violation.reserve(n_rows);

    PowerState x = x0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * dt;
      const double vg = profile.magnitude(t);
      const double d = vg * vg;
      const ControlPQ u = law(x, t, d);
      const double norm_u = u.norm();
      const double lb = params.u_lo_v * vg;
      const double ub = params.u_hi_v * vg;
      const double margin = std::min(norm_u - lb, ub - norm_u);
      const bool violated = margin < -tol;

      trace.t_s.push_back(t);
      trace.p_w.push_back(x.p_w);
      trace.q_var.push_back(x.q_var);
      trace.u_p.push_back(u.u_p);
      trace.u_q.push_back(u.u_q);
      trace.vg_v.push_back(vg);
      trace.norm_u.push_back(norm_u);
      trace.lb_v2.push_back(lb);
      trace.ub_v2.push_back(ub);
      trace.violation.push_back(violated ? 1 : 0);
      trace.worst_margin_v2 = std::min(trace.worst_margin_v2, margin);
      if (violated) ++trace.n_violations;

      if (k < n_steps) x = step_rk4(x, law, profile, t, dt, pm);
    }

    if (trace.n_violations > 0) rep.achievable = false;
    rep.worst_margin_v2 = std::min(rep.worst_margin_v2, trace.worst_margin_v2);
    rep.traces.push_back(std::move(trace));
  }
  return rep;
}

std::optional<Vec3> implication_counterexample(const QuadraticForm& qa,
                                               const QuadraticForm& qb,
                                               const SampleBox& box,
                                               std::uint64_t n_samples,
                                               std::uint64_t seed) {
  if (n_samples < 1)
    throw std::invalid_argument("implication_counterexample: n_samples >= 1");
  const CounterRng rng(seed, kStreamCounterexample);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    const Vec3 z{rng.uniform(3 * i, box.d_lo, box.d_hi),
                 rng.uniform(3 * i + 1, box.p_lo, box.p_hi),
                 rng.uniform(3 * i + 2, box.q_lo, box.q_hi)};
    if (qa.evaluate(z) < 0.0) continue;
    if (qb.evaluate(z) < -1e-6) return z;
  }
  return std::nullopt;
}

}  // namespace vsi
