#include "vsi/controller.hpp"

#include <cmath>
#include <limits>

namespace vsi {

namespace {
constexpr double kMarginalBand = 1e-9;
}

ControlPQ feedforward(const Setpoint& x_ref, double d, const PlantMatrices& pm) {
  const Vec2 u = -(pm.binv_a * x_ref.vec()) - d * pm.binv_e;
  return {u.x, u.y};
}

ControlPQ feedback_control(const PowerState& x, const Setpoint& x_ref,
                           const Gain& gain, double d, const PlantMatrices& pm) {
  const Vec2 e = x.vec() - x_ref.vec();
  const Vec2 u = -(gain.k * e) - (pm.binv_a * x_ref.vec()) - d * pm.binv_e;
  return {u.x, u.y};
}

Mat2 closed_loop_matrix(const Gain& gain, const PlantMatrices& pm) {
  return pm.a - pm.b * gain.k;
}

double StabilityReport::time_constant() const {
  const double worst = std::max(eig1.real(), eig2.real());
  if (worst >= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (-worst);
}

StabilityReport stability(const Gain& gain, const PlantMatrices& pm) {
  const Mat2 m = closed_loop_matrix(gain, pm);
  StabilityReport rep;
  rep.trace = m.trace();
  rep.det = m.det();
  const double disc = rep.trace * rep.trace - 4.0 * rep.det;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    rep.eig1 = {(rep.trace - s) / 2.0, 0.0};
    rep.eig2 = {(rep.trace + s) / 2.0, 0.0};
  } else {
    const double w = std::sqrt(-disc) / 2.0;
    rep.eig1 = {rep.trace / 2.0, -w};
    rep.eig2 = {rep.trace / 2.0, w};
  }
  rep.stabilizing = rep.trace < -kMarginalBand && rep.det > kMarginalBand;
  return rep;
}

bool is_stabilizing(const Gain& gain, const PlantMatrices& pm) {
  return stability(gain, pm).stabilizing;
}

Mat2 expm(const Mat2& m, double t) {
  // m = mu*I + n with trace(n) = 0, so n^2 = delta*I where delta = mu^2 - det(m).
  const double mu = m.trace() / 2.0;
  const Mat2 n = m - Mat2::scaled_identity(mu);
  const double delta = mu * mu - m.det();
  const double z = delta * t * t;

  double ch, sh;  // cosh(sqrt(delta) t) and sinh(sqrt(delta) t)/sqrt(delta)
  if (z > 1e-12) {
    const double w = std::sqrt(delta);
    ch = std::cosh(w * t);
    sh = std::sinh(w * t) / w;
  } else if (z < -1e-12) {
    const double w = std::sqrt(-delta);
    ch = std::cos(w * t);
    sh = std::sin(w * t) / w;
  } else {
    ch = 1.0 + z / 2.0 + z * z / 24.0;
    sh = t * (1.0 + z / 6.0 + z * z / 120.0);
  }
  const double scale = std::exp(mu * t);
  return scale * (ch * Mat2::identity() + sh * n);
}

PowerState error_response(const PowerState& e0, const Gain& gain,
                          const PlantMatrices& pm, double t) {
  return PowerState::from(expm(closed_loop_matrix(gain, pm), t) * e0.vec());
}

}  // namespace vsi
