#pragma once

// Static state-feedback power controller with feedforward disturbance
// cancellation: u = -K(x - x_ref) - B^{-1}A x_ref - B^{-1}E d. The closed
// loop error obeys de/dt = (A - BK) e, so stabilizing gains are exactly
// those making A - BK Hurwitz.

#include <complex>
#include <optional>

#include "vsi/linalg.hpp"
#include "vsi/model.hpp"

namespace vsi {

struct Gain {
  Mat2 k;

  static Gain zero() { return {}; }
  double frobenius() const { return k.frobenius(); }
};

struct Setpoint {
  double p_w = 0.0;
  double q_var = 0.0;

  Vec2 vec() const { return {p_w, q_var}; }
  double norm() const { return std::hypot(p_w, q_var); }

  /// P / sqrt(P^2 + Q^2); empty for the zero setpoint.
  std::optional<double> power_factor() const {
    if (p_w == 0.0 && q_var == 0.0) return std::nullopt;
    return p_w / norm();
  }
};

/// Feedforward input placing the equilibrium at x_ref under disturbance d.
ControlPQ feedforward(const Setpoint& x_ref, double d, const PlantMatrices& pm);

ControlPQ feedback_control(const PowerState& x, const Setpoint& x_ref,
                           const Gain& gain, double d, const PlantMatrices& pm);

Mat2 closed_loop_matrix(const Gain& gain, const PlantMatrices& pm);  // A - BK

struct StabilityReport {
  bool stabilizing = false;
  std::complex<double> eig1;
  std::complex<double> eig2;
  double trace = 0.0;
  double det = 0.0;

  /// 1 / |largest real part|; infinity when not stabilizing.
  double time_constant() const;
};

/// Exact 2x2 Hurwitz test: trace < 0 and det > 0, with a 1e-9 band around
/// either boundary classified as not stabilizing (strict stability only).
StabilityReport stability(const Gain& gain, const PlantMatrices& pm);
bool is_stabilizing(const Gain& gain, const PlantMatrices& pm);

/// Closed-form exp(M t) for 2x2 M (scalar-shift + trig/hyperbolic split).
Mat2 expm(const Mat2& m, double t);

/// e(t) = exp((A - BK) t) e0; the exact reference for simulated trajectories.
PowerState error_response(const PowerState& e0, const Gain& gain,
                          const PlantMatrices& pm, double t);

/// Control law object usable with step_rk4.
struct FeedbackLaw {
  Setpoint x_ref;
  Gain gain;
  const PlantMatrices* pm;

  ControlPQ operator()(const PowerState& x, double /*t*/, double d) const {
    return feedback_control(x, x_ref, gain, d, *pm);
  }
};

}  // namespace vsi
