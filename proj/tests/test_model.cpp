#include <cmath>

#include "doctest.h"
#include "vsi/controller.hpp"
#include "vsi/model.hpp"
#include "vsi/rng.hpp"

using namespace vsi;

namespace {
const PlantParams kRef = PlantParams::reference();
const PlantMatrices kPm = plant_matrices(kRef);
}  // namespace

TEST_CASE("plant matrices from the reference parameters") {
  // R/L = 30, 3/(2L) = 375, omega = 2*pi*50.
  CHECK(kPm.a.a == doctest::Approx(-30.0).epsilon(1e-14));
  CHECK(kPm.a.d == doctest::Approx(-30.0).epsilon(1e-14));
  CHECK(kPm.a.b == -kRef.omega_rad_s);
  CHECK(kPm.a.c == kRef.omega_rad_s);
  CHECK(kRef.omega_rad_s == doctest::Approx(314.159265358979).epsilon(1e-12));
  CHECK(kPm.b.a == doctest::Approx(375.0).epsilon(1e-14));
  CHECK(kPm.b.b == 0.0);
  CHECK(kPm.e.x == doctest::Approx(-375.0).epsilon(1e-14));
  CHECK(kPm.e.y == 0.0);
  CHECK(kPm.b.det() != 0.0);
}

TEST_CASE("zero resistance makes A skew-symmetric") {
  const PlantParams p = PlantParams::make(1e-12, 4e-3, 50.0, 105.6, 114.4, 104.5, 115.5);
  const PlantMatrices pm = plant_matrices(p);
  CHECK(pm.a.b == -pm.a.c);
  CHECK(pm.a.a == doctest::Approx(0.0).epsilon(0).margin(1e-9));
}

TEST_CASE("B^{-1}E is exactly [-1, 0] for any parameters") {
  for (double l : {1e-3, 4e-3, 0.5}) {
    const PlantMatrices pm =
        plant_matrices(PlantParams::make(0.1, l, 60.0, 100.0, 120.0, 100.0, 120.0));
    CHECK(pm.binv_e.x == -1.0);
    CHECK(pm.binv_e.y == 0.0);
  }
}

TEST_CASE("parameter invariants rejected at construction") {
  CHECK_THROWS_AS(PlantParams::make(0.0, 4e-3, 50, 105, 114, 104, 115), std::invalid_argument);
  CHECK_THROWS_AS(PlantParams::make(0.1, 0.0, 50, 105, 114, 104, 115), std::invalid_argument);
  CHECK_THROWS_AS(PlantParams::make(0.1, 4e-3, 50, 114, 105, 104, 115), std::invalid_argument);
  CHECK_THROWS_AS(PlantParams::make(0.1, 4e-3, 50, 105, 114, 115, 104), std::invalid_argument);
}

TEST_CASE("dynamics: origin, feedforward equilibrium, single column") {
  const PowerState zero{};
  CHECK(dynamics(zero, {}, 0.0, kPm).norm() == 0.0);

  const CounterRng rng(99, 1);
  for (int i = 0; i < 200; ++i) {
    const Setpoint x_ref{rng.uniform(4 * i, -1e4, 1e4), rng.uniform(4 * i + 1, -1e4, 1e4)};
    const double d = rng.uniform(4 * i + 2, kRef.d_lo(), kRef.d_hi());
    const ControlPQ u = feedforward(x_ref, d, kPm);
    const PowerState dx = dynamics({x_ref.p_w, x_ref.q_var}, u, d, kPm);
    const double scale = 1.0 + (kPm.a * x_ref.vec()).norm();
    CHECK(dx.norm() <= 1e-9 * scale);
  }

  const PowerState dx = dynamics({1.0, 0.0}, {}, 0.0, kPm);
  CHECK(dx.p_w == doctest::Approx(-30.0).epsilon(1e-14));
  CHECK(dx.q_var == kRef.omega_rad_s);
}

TEST_CASE("alpha-beta transform identities") {
  const GridProfile prof = GridProfile::constant(110.0, 105.6, 114.4);

  SUBCASE("at t = 0 the grid aligns with alpha") {
    const double vg = prof.magnitude(0.0);
    const ControlAB ab = to_alpha_beta({vg * vg, 0.0}, prof, 0.0, kRef);
    CHECK(ab.u_alpha == doctest::Approx(vg).epsilon(1e-12));
    CHECK(ab.u_beta == doctest::Approx(0.0).epsilon(0).margin(1e-9));
  }

  SUBCASE("round trip and norm bridge on random inputs") {
    const CounterRng rng(7, 2);
    for (int i = 0; i < 2000; ++i) {
      const ControlPQ u{rng.uniform(3 * i, -1e6, 1e6), rng.uniform(3 * i + 1, -1e6, 1e6)};
      const double t = rng.uniform(3 * i + 2, 0.0, 1.0);
      const GridComponents g = prof.components(t, kRef.omega_rad_s);
      const ControlAB ab = to_alpha_beta(u, g);
      const ControlPQ back = from_alpha_beta(ab, g);
      const double scale = std::max(1.0, u.norm());
      CHECK(std::abs(back.u_p - u.u_p) <= 1e-12 * scale);
      CHECK(std::abs(back.u_q - u.u_q) <= 1e-12 * scale);
      CHECK(std::abs(ab.norm() * g.vg - u.norm()) <= 1e-9 * scale);
    }
  }

  SUBCASE("degenerate grid rejected") {
    CHECK_THROWS_AS(to_alpha_beta({1.0, 0.0}, GridComponents{0.0, 0.0, 0.0}),
                    std::domain_error);
  }
}

TEST_CASE("grid profiles stay within bounds and are pure in t") {
  const double lo = kRef.vg_lo_v;
  const double hi = kRef.vg_hi_v;
  const GridProfile profiles[] = {
      GridProfile::constant(lo, lo, hi),
      GridProfile::constant(hi, lo, hi),
      GridProfile::sinusoid(0.5 * (lo + hi), 0.45 * (hi - lo), 2.0, lo, hi),
      GridProfile::random_walk(0.5, 1e-3, 11, lo, hi),  // large step exercises the clamp
  };
  const CounterRng rng(3, 4);
  for (const GridProfile& p : profiles) {
    for (int i = 0; i < 10000; ++i) {
      const double t = rng.uniform(static_cast<std::uint64_t>(i), 0.0, 0.5);
      const double v = p.magnitude(t);
      CHECK(v >= lo);
      CHECK(v <= hi);
      CHECK(p.magnitude(t) == v);
    }
  }

  SUBCASE("identically constructed profiles agree everywhere") {
    const GridProfile a = GridProfile::random_walk(0.1, 1e-4, 5, lo, hi);
    const GridProfile b = GridProfile::random_walk(0.1, 1e-4, 5, lo, hi);
    for (double t : {0.0, 0.01, 0.37, 0.499}) CHECK(a.magnitude(t) == b.magnitude(t));
  }

  SUBCASE("invalid constructions rejected") {
    CHECK_THROWS_AS(GridProfile::constant(lo - 1.0, lo, hi), std::invalid_argument);
    CHECK_THROWS_AS(GridProfile::sinusoid(0.5 * (lo + hi), hi - lo, 2.0, lo, hi),
                    std::invalid_argument);
  }
}

TEST_CASE("rk4: equilibrium start stays put") {
  const GridProfile prof = GridProfile::constant(110.0, 105.6, 114.4);
  const Setpoint x_ref{500.0, -200.0};
  const FeedbackLaw law{x_ref, Gain::zero(), &kPm};
  PowerState x{x_ref.p_w, x_ref.q_var};
  for (int k = 0; k < 1000; ++k)
    x = step_rk4(x, law, prof, k * kDefaultDt, kDefaultDt, kPm);
  CHECK(std::abs(x.p_w - x_ref.p_w) <= 1e-9 * std::abs(x_ref.p_w));
  CHECK(std::abs(x.q_var - x_ref.q_var) <= 1e-9 * std::abs(x_ref.q_var));
}

TEST_CASE("rk4: fourth-order defect against the matrix exponential") {
  const GridProfile prof = GridProfile::constant(110.0, 105.6, 114.4);
  const Setpoint x_ref{};
  Gain gain;
  gain.k = {0.05, 0.01, -0.02, 0.08};
  const FeedbackLaw law{x_ref, gain, &kPm};
  const PowerState x0{1000.0, 500.0};
  const double t_end = 0.02;

  const auto defect = [&](double dt) {
    PowerState x = x0;
    const int n = static_cast<int>(std::llround(t_end / dt));
    for (int k = 0; k < n; ++k) x = step_rk4(x, law, prof, k * dt, dt, kPm);
    const PowerState exact = error_response(x0, gain, kPm, t_end);
    return std::hypot(x.p_w - exact.p_w, x.q_var - exact.q_var);
  };

  const double e1 = defect(1e-3);
  const double e2 = defect(5e-4);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.5);
  CHECK(order <= 4.5);
}

TEST_CASE("rk4: open-loop decay envelope exp(-30 t)") {
  const GridProfile prof = GridProfile::constant(110.0, 105.6, 114.4);
  const FeedbackLaw law{Setpoint{}, Gain::zero(), &kPm};
  PowerState x{100.0, 0.0};
  const double x0_norm = x.norm();
  for (int k = 0; k < 2000; ++k) {
    x = step_rk4(x, law, prof, k * kDefaultDt, kDefaultDt, kPm);
    const double t = (k + 1) * kDefaultDt;
    // A = -30 I + rotation, so the norm decays exactly like exp(-30 t).
    CHECK(x.norm() == doctest::Approx(x0_norm * std::exp(-30.0 * t)).epsilon(1e-6));
  }
}
