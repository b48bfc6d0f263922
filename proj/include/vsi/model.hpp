#pragma once

// Plant model of a grid-connected voltage-source inverter in the alpha-beta
// frame: instantaneous active/reactive power dynamics driven by a synthetic
// control input, with the squared grid-voltage magnitude entering as a
// measurable disturbance.

#include <cmath>
#include <cstdint>
#include <string>

#include "vsi/linalg.hpp"
#include "vsi/rng.hpp"

namespace vsi {

/// Physical and constraint constants. `omega_rad_s` is always 2*pi*f_hz.
struct PlantParams {
  double r_ohm = 0.0;     // filter resistance
  double l_henry = 0.0;   // filter inductance
  double f_hz = 0.0;      // grid frequency
  double omega_rad_s = 0.0;
  double vg_lo_v = 0.0;   // grid-voltage magnitude bounds
  double vg_hi_v = 0.0;
  double u_lo_v = 0.0;    // inverter output-voltage magnitude bounds
  double u_hi_v = 0.0;

  static PlantParams make(double r_ohm, double l_henry, double f_hz,
                          double vg_lo_v, double vg_hi_v,
                          double u_lo_v, double u_hi_v);

  /// Built-in default parameter set used by the CLI when no config is given.
  static PlantParams reference();

  double d_lo() const { return vg_lo_v * vg_lo_v; }
  double d_hi() const { return vg_hi_v * vg_hi_v; }
};

struct PowerState {
  double p_w = 0.0;
  double q_var = 0.0;

  Vec2 vec() const { return {p_w, q_var}; }
  static PowerState from(Vec2 v) { return {v.x, v.y}; }
  double norm() const { return std::hypot(p_w, q_var); }
};

/// Synthetic control input (units V^2, products of voltages).
struct ControlPQ {
  double u_p = 0.0;
  double u_q = 0.0;

  Vec2 vec() const { return {u_p, u_q}; }
  double norm() const { return std::hypot(u_p, u_q); }
};

/// Physical inverter output voltages in the alpha-beta frame (V).
struct ControlAB {
  double u_alpha = 0.0;
  double u_beta = 0.0;

  double norm() const { return std::hypot(u_alpha, u_beta); }
};

struct PlantMatrices {
  Mat2 a;          // [[-R/L, -omega], [omega, -R/L]]
  Mat2 b;          // (3/(2L)) * I
  Vec2 e;          // [-3/(2L), 0]
  double b_scalar; // 3/(2L)
  Mat2 binv_a;     // B^{-1} A
  Vec2 binv_e;     // B^{-1} E = [-1, 0] identically
};

PlantMatrices plant_matrices(const PlantParams& params);

/// State derivative A x + B u + E d.
PowerState dynamics(const PowerState& x, const ControlPQ& u, double d,
                    const PlantMatrices& pm);

struct GridComponents {
  double vga = 0.0;  // V_G cos(omega t)
  double vgb = 0.0;  // V_G sin(omega t)
  double vg = 0.0;   // magnitude
};

/// Deterministic grid-voltage magnitude trajectory confined to [lo, hi].
/// All kinds are pure functions of t; the random walk replays its increment
/// stream up to floor(t/dt) on every query.
class GridProfile {
 public:
  enum class Kind : std::uint8_t { kConstant, kSinusoid, kRandomWalk };

  static GridProfile constant(double value_v, double lo_v, double hi_v,
                              std::string label = "constant");
  static GridProfile sinusoid(double mean_v, double amplitude_v, double period_s,
                              double lo_v, double hi_v,
                              std::string label = "sinusoid");
  static GridProfile random_walk(double step_v, double dt_s, std::uint64_t seed,
                                 double lo_v, double hi_v,
                                 std::string label = "random_walk");

  double magnitude(double t) const;
  GridComponents components(double t, double omega_rad_s) const;

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double value() const { return value_; }
  double mean() const { return mean_; }
  double amplitude() const { return amplitude_; }
  double period() const { return period_; }
  double step() const { return step_; }
  double walk_dt() const { return walk_dt_; }
  std::uint64_t seed() const { return seed_; }

 private:
  GridProfile() = default;

  Kind kind_ = Kind::kConstant;
  std::string label_;
  double lo_ = 0.0, hi_ = 0.0;
  double value_ = 0.0;                       // constant
  double mean_ = 0.0, amplitude_ = 0.0, period_ = 0.0;  // sinusoid
  double step_ = 0.0, walk_dt_ = 0.0;        // random walk
  std::uint64_t seed_ = 0;
};

/// u_alpha-beta from the synthetic input: exact inverse of the 2x2 map
/// [[vga, vgb], [vgb, -vga]]. Throws std::domain_error when the grid
/// magnitude is not positive.
ControlAB to_alpha_beta(const ControlPQ& u, const GridComponents& g);
ControlAB to_alpha_beta(const ControlPQ& u, const GridProfile& profile, double t,
                        const PlantParams& params);

/// Forward map u_P = vga*u_alpha + vgb*u_beta, u_Q = vgb*u_alpha - vga*u_beta.
ControlPQ from_alpha_beta(const ControlAB& uab, const GridComponents& g);
ControlPQ from_alpha_beta(const ControlAB& uab, const GridProfile& profile, double t,
                          const PlantParams& params);

/// One fixed-step RK4 step of the closed loop. `law(x, t, d) -> ControlPQ`
/// is evaluated at each stage with the disturbance sampled from the profile.
template <typename Law>
PowerState step_rk4(const PowerState& x, Law&& law, const GridProfile& profile,
                    double t, double dt, const PlantMatrices& pm) {
  const auto f = [&](const PowerState& xs, double ts) {
    const double vg = profile.magnitude(ts);
    const double d = vg * vg;
    return dynamics(xs, law(xs, ts, d), d, pm);
  };
  const PowerState k1 = f(x, t);
  const PowerState k2 = f({x.p_w + 0.5 * dt * k1.p_w, x.q_var + 0.5 * dt * k1.q_var}, t + 0.5 * dt);
  const PowerState k3 = f({x.p_w + 0.5 * dt * k2.p_w, x.q_var + 0.5 * dt * k2.q_var}, t + 0.5 * dt);
  const PowerState k4 = f({x.p_w + dt * k3.p_w, x.q_var + dt * k3.q_var}, t + dt);
  return {x.p_w + dt / 6.0 * (k1.p_w + 2.0 * k2.p_w + 2.0 * k3.p_w + k4.p_w),
          x.q_var + dt / 6.0 * (k1.q_var + 2.0 * k2.q_var + 2.0 * k3.q_var + k4.q_var)};
}

inline constexpr double kDefaultDt = 1e-4;      // resolves both plant time scales >= 200x
inline constexpr double kDefaultHorizon = 0.5;  // seconds

}  // namespace vsi
