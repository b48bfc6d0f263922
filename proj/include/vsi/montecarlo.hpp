#pragma once

// Setpoint/gain sampling, achievability-rate evaluation S(K), Monte Carlo
// gain optimization, and region mapping. Everything is deterministic given
// (config, seed): every random draw is addressed by (seed, stream, sample
// index), and parallel results are keyed by index, so reports are
// bit-identical for any worker count.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vsi/certificate.hpp"
#include "vsi/controller.hpp"
#include "vsi/model.hpp"
#include "vsi/oracle.hpp"

namespace vsi {

enum class CheckerKind : std::uint8_t { kCertificate, kSteadyState, kTrajectory };

std::string to_string(CheckerKind kind);
CheckerKind checker_from_string(const std::string& name);

struct SamplingConfig {
  std::array<double, 2> p_range{0.0, 8000.0};
  std::array<double, 2> q_range{-2500.0, 200.0};
  std::array<double, 2> pf_range{0.95, 1.0};
  int n_setpoints = 500;
  std::array<double, 2> k_box{-0.2, 0.2};  // per-entry sampling interval for K
  int n_gains = 2000;
  std::uint64_t seed = 1;
  CheckerKind checker = CheckerKind::kTrajectory;
  bool include_zero_gain = true;  // always score the open-loop baseline

  void validate() const;  // throws std::invalid_argument
};

/// Uniform (P, Q) draws from the ranges, rejecting power factors outside
/// pf_range (the zero setpoint has no power factor and is never rejected),
/// until n_setpoints are accepted. Deterministic given (seed, stream_id).
/// Throws std::runtime_error if acceptance stays below 1% after 1e6 draws.
std::vector<Setpoint> sample_setpoints(const SamplingConfig& cfg,
                                       std::uint64_t stream_id);

/// Everything a checker needs besides the gain and setpoint.
struct CheckContext {
  PlantParams params;
  std::vector<GridProfile> ensemble;  // used by the trajectory checker
  double dt = kDefaultDt;
  double horizon = kDefaultHorizon;

  static CheckContext defaults(const PlantParams& params);
};

struct SetpointVerdict {
  bool achievable = false;
  bool inconclusive = false;
  double margin = 0.0;
};

struct RateReport {
  Gain gain;
  CheckerKind checker = CheckerKind::kTrajectory;
  bool stabilizing = true;
  double rate = 0.0;  // exactly n_achievable / n_total
  int n_achievable = 0;
  int n_total = 0;
  int n_inconclusive = 0;
  double worst_margin = 0.0;  // min per-setpoint margin over the sample
  std::vector<SetpointVerdict> verdicts;
  std::vector<std::string> flags;
};

/// Scores one gain on a fixed setpoint list. A non-stabilizing gain yields
/// rate 0 with flag "unstable" (no setpoints evaluated). For the trajectory
/// checker the horizon must cover 5 closed-loop time constants (throws).
RateReport achievability_rate(const Gain& gain, const std::vector<Setpoint>& setpoints,
                              CheckerKind checker, const CheckContext& ctx,
                              int threads = 1);

struct SweepEntry {
  long index = 0;  // -1 = zero-gain baseline, >= n_gains = extra candidates
  Gain gain;
  bool stabilizing = false;
  bool slow = false;  // stabilizing, but 5*tau exceeds the horizon; not scored
  bool scored = false;
  double rate = 0.0;
  int n_achievable = 0;
  int n_total = 0;
  double worst_margin = 0.0;
};

struct OptimizeResult {
  RateReport best;
  long best_index = 0;
  std::vector<SweepEntry> sweep;   // one entry per candidate, in index order
  std::vector<Setpoint> setpoints; // the shared sample all gains were scored on
  int n_unstable = 0;
  int n_slow = 0;
};

/// Samples n_gains gains entrywise-uniform from k_box, scores every
/// stabilizing (and fast-enough) candidate on one shared setpoint sample,
/// and returns the argmax of S(K). Ties break by larger worst margin, then
/// smaller Frobenius norm, then smaller index. Throws std::runtime_error if
/// no candidate is scorable.
OptimizeResult optimize_gain(const SamplingConfig& cfg, const CheckContext& ctx,
                             int threads = 1,
                             const std::vector<Gain>& extra_gains = {});

struct RegionGrid {
  double p_min = 0.0, p_max = 0.0;
  double q_min = 0.0, q_max = 0.0;
  int n_p = 2, n_q = 2;  // lattice node counts, >= 2
};

struct RegionCell {
  double p_w = 0.0;
  double q_var = 0.0;
  bool achievable = false;
  bool inconclusive = false;
  double margin = 0.0;
};

struct RegionMap {
  RegionGrid grid;
  CheckerKind checker = CheckerKind::kSteadyState;
  Gain gain;
  std::vector<RegionCell> cells;  // p-major: index = ip * n_q + iq
};

RegionMap map_region(const Gain& gain, const RegionGrid& grid, CheckerKind checker,
                     const CheckContext& ctx, int threads = 1);

namespace detail {

/// Trajectory checking for many setpoints under one gain: the closed-loop
/// error is linear in the initial error, so u(t_k) for an origin start is
/// (K Phi_k - B^{-1}A) x_ref + [d_k, 0] with Phi_k the RK4 transition matrix
/// power (RK4 on a linear ODE is exactly the degree-4 Taylor step). Profiles
/// and squared envelopes are precomputed once; each setpoint check is a
/// fused scan with early exit, the last sample checked first so steady-state
/// violations surface immediately.
class TrajectoryBatch {
 public:
  TrajectoryBatch(const CheckContext& ctx);

  struct GainData {
    std::vector<Mat2> g;  // K * Phi_k - B^{-1}A per sample
  };

  GainData prepare(const Gain& gain) const;
  SetpointVerdict check(const GainData& gd, const Setpoint& x_ref) const;

  std::size_t n_samples() const { return n_steps_ + 1; }

 private:
  PlantMatrices pm_;
  double u_lo_ = 0.0, u_hi_ = 0.0;
  std::size_t n_steps_ = 0;
  double dt_ = 0.0;
  std::vector<std::vector<double>> d_;    // per profile: V_G(t_k)^2
  std::vector<std::vector<double>> lo2_;  // (u_lo V_G - tol)^2
  std::vector<std::vector<double>> hi2_;  // (u_hi V_G + tol)^2
};

}  // namespace detail

}  // namespace vsi
