#include "vsi/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vsi {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

PlantParams PlantParams::make(double r_ohm, double l_henry, double f_hz,
                              double vg_lo_v, double vg_hi_v,
                              double u_lo_v, double u_hi_v) {
  require(r_ohm > 0.0, "PlantParams: R must be > 0");
  require(l_henry > 0.0, "PlantParams: L must be > 0");
  require(f_hz > 0.0, "PlantParams: f must be > 0");
  require(vg_lo_v > 0.0 && vg_lo_v <= vg_hi_v, "PlantParams: need 0 < vg_lo <= vg_hi");
  require(u_lo_v > 0.0 && u_lo_v <= u_hi_v, "PlantParams: need 0 < u_lo <= u_hi");
  PlantParams p;
  p.r_ohm = r_ohm;
  p.l_henry = l_henry;
  p.f_hz = f_hz;
  p.omega_rad_s = 2.0 * kPi * f_hz;
  p.vg_lo_v = vg_lo_v;
  p.vg_hi_v = vg_hi_v;
  p.u_lo_v = u_lo_v;
  p.u_hi_v = u_hi_v;
  return p;
}

PlantParams PlantParams::reference() {
  return make(0.12, 4e-3, 50.0, 105.6, 114.4, 104.5, 115.5);
}

PlantMatrices plant_matrices(const PlantParams& params) {
  PlantMatrices pm;
  const double rl = params.r_ohm / params.l_henry;
  const double w = params.omega_rad_s;
  const double b = 3.0 / (2.0 * params.l_henry);
  pm.a = {-rl, -w, w, -rl};
  pm.b = Mat2::scaled_identity(b);
  pm.e = {-b, 0.0};
  pm.b_scalar = b;
  pm.binv_a = {pm.a.a / b, pm.a.b / b, pm.a.c / b, pm.a.d / b};
  pm.binv_e = {pm.e.x / b, pm.e.y / b};  // the 3/(2L) factors cancel: [-1, 0]
  return pm;
}

PowerState dynamics(const PowerState& x, const ControlPQ& u, double d,
                    const PlantMatrices& pm) {
  const Vec2 dx = pm.a * x.vec() + pm.b * u.vec() + d * pm.e;
  return PowerState::from(dx);
}

GridProfile GridProfile::constant(double value_v, double lo_v, double hi_v,
                                  std::string label) {
  if (!(lo_v <= value_v && value_v <= hi_v))
    throw std::invalid_argument("GridProfile::constant: value outside [lo, hi]");
  GridProfile p;
  p.kind_ = Kind::kConstant;
  p.label_ = std::move(label);
  p.lo_ = lo_v;
  p.hi_ = hi_v;
  p.value_ = value_v;
  return p;
}

GridProfile GridProfile::sinusoid(double mean_v, double amplitude_v, double period_s,
                                  double lo_v, double hi_v, std::string label) {
  if (amplitude_v < 0.0 || period_s <= 0.0)
    throw std::invalid_argument("GridProfile::sinusoid: need amplitude >= 0 and period > 0");
  if (!(lo_v <= mean_v - amplitude_v && mean_v + amplitude_v <= hi_v))
    throw std::invalid_argument("GridProfile::sinusoid: mean +- amplitude outside [lo, hi]");
  GridProfile p;
  p.kind_ = Kind::kSinusoid;
  p.label_ = std::move(label);
  p.lo_ = lo_v;
  p.hi_ = hi_v;
  p.mean_ = mean_v;
  p.amplitude_ = amplitude_v;
  p.period_ = period_s;
  return p;
}

GridProfile GridProfile::random_walk(double step_v, double dt_s, std::uint64_t seed,
                                     double lo_v, double hi_v, std::string label) {
  if (step_v < 0.0 || dt_s <= 0.0)
    throw std::invalid_argument("GridProfile::random_walk: need step >= 0 and dt > 0");
  if (!(lo_v <= hi_v)) throw std::invalid_argument("GridProfile::random_walk: lo > hi");
  GridProfile p;
  p.kind_ = Kind::kRandomWalk;
  p.label_ = std::move(label);
  p.lo_ = lo_v;
  p.hi_ = hi_v;
  p.step_ = step_v;
  p.walk_dt_ = dt_s;
  p.seed_ = seed;
  return p;
}

double GridProfile::magnitude(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return value_;
    case Kind::kSinusoid:
      return mean_ + amplitude_ * std::sin(2.0 * kPi * t / period_);
    case Kind::kRandomWalk: {
      const auto steps = static_cast<std::uint64_t>(std::max(0.0, std::floor(t / walk_dt_)));
      const CounterRng rng(seed_, kStreamWalkProfile);
      double v = 0.5 * (lo_ + hi_);
      for (std::uint64_t k = 0; k < steps; ++k) {
        v += step_ * (2.0 * rng.uniform01(k) - 1.0);
        v = std::clamp(v, lo_, hi_);
      }
      return v;
    }
  }
  return value_;
}

GridComponents GridProfile::components(double t, double omega_rad_s) const {
  const double vg = magnitude(t);
  return {vg * std::cos(omega_rad_s * t), vg * std::sin(omega_rad_s * t), vg};
}

ControlAB to_alpha_beta(const ControlPQ& u, const GridComponents& g) {
  if (!(g.vg > 0.0)) throw std::domain_error("to_alpha_beta: grid magnitude must be > 0");
  const double d = g.vg * g.vg;
  return {(g.vga * u.u_p + g.vgb * u.u_q) / d, (g.vgb * u.u_p - g.vga * u.u_q) / d};
}

ControlAB to_alpha_beta(const ControlPQ& u, const GridProfile& profile, double t,
                        const PlantParams& params) {
  return to_alpha_beta(u, profile.components(t, params.omega_rad_s));
}

ControlPQ from_alpha_beta(const ControlAB& uab, const GridComponents& g) {
  return {g.vga * uab.u_alpha + g.vgb * uab.u_beta,
          g.vgb * uab.u_alpha - g.vga * uab.u_beta};
}

ControlPQ from_alpha_beta(const ControlAB& uab, const GridProfile& profile, double t,
                          const PlantParams& params) {
  return from_alpha_beta(uab, profile.components(t, params.omega_rad_s));
}

}  // namespace vsi
