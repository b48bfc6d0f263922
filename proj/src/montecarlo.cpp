#include "vsi/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "vsi/rng.hpp"
#include "vsi/util.hpp"

namespace vsi {

std::string to_string(CheckerKind kind) {
  switch (kind) {
    case CheckerKind::kCertificate: return "certificate";
    case CheckerKind::kSteadyState: return "steady-state";
    case CheckerKind::kTrajectory: return "trajectory";
  }
  return "unknown";
}

CheckerKind checker_from_string(const std::string& name) {
  if (name == "certificate") return CheckerKind::kCertificate;
  if (name == "steady-state") return CheckerKind::kSteadyState;
  if (name == "trajectory") return CheckerKind::kTrajectory;
  throw std::invalid_argument("unknown checker: " + name);
}

void SamplingConfig::validate() const {
  if (!(p_range[0] <= p_range[1]) || !(q_range[0] <= q_range[1]) ||
      !(k_box[0] <= k_box[1]))
    throw std::invalid_argument("SamplingConfig: ranges must be ordered");
  if (!(pf_range[0] <= pf_range[1]) || pf_range[0] < 0.0 || pf_range[1] > 1.0)
    throw std::invalid_argument("SamplingConfig: pf_range must be within [0, 1]");
  if (n_setpoints < 1 || n_gains < 1)
    throw std::invalid_argument("SamplingConfig: counts must be >= 1");
}

std::vector<Setpoint> sample_setpoints(const SamplingConfig& cfg,
                                       std::uint64_t stream_id) {
  cfg.validate();
  const CounterRng rng(cfg.seed, kStreamSetpoints + 16 * stream_id);
  std::vector<Setpoint> out;
  out.reserve(static_cast<std::size_t>(cfg.n_setpoints));
  std::uint64_t attempt = 0;
  while (out.size() < static_cast<std::size_t>(cfg.n_setpoints)) {
    const Setpoint sp{rng.uniform(2 * attempt, cfg.p_range[0], cfg.p_range[1]),
                      rng.uniform(2 * attempt + 1, cfg.q_range[0], cfg.q_range[1])};
    ++attempt;
    const auto pf = sp.power_factor();
    if (!pf || (*pf >= cfg.pf_range[0] && *pf <= cfg.pf_range[1])) out.push_back(sp);
    if (attempt == 1000000 &&
        static_cast<double>(out.size()) < 0.01 * static_cast<double>(attempt))
      throw std::runtime_error(
          "sample_setpoints: acceptance rate below 1% after 1e6 draws; "
          "check p/q ranges against pf_range");
  }
  return out;
}

CheckContext CheckContext::defaults(const PlantParams& params) {
  CheckContext ctx;
  ctx.params = params;
  ctx.dt = kDefaultDt;
  ctx.horizon = kDefaultHorizon;
  ctx.ensemble = default_ensemble(params, ctx.dt);
  return ctx;
}

namespace detail {

TrajectoryBatch::TrajectoryBatch(const CheckContext& ctx)
    : pm_(plant_matrices(ctx.params)),
      u_lo_(ctx.params.u_lo_v),
      u_hi_(ctx.params.u_hi_v),
      dt_(ctx.dt) {
  if (ctx.ensemble.empty())
    throw std::invalid_argument("TrajectoryBatch: empty profile ensemble");
  if (!(ctx.dt > 0.0) || !(ctx.horizon > 0.0))
    throw std::invalid_argument("TrajectoryBatch: need dt > 0 and horizon > 0");
  n_steps_ = static_cast<std::size_t>(std::llround(ctx.horizon / ctx.dt));
  const double tol = violation_tolerance(ctx.params);
  const std::size_t n = n_steps_ + 1;
  d_.resize(ctx.ensemble.size());
  lo2_.resize(ctx.ensemble.size());
  hi2_.resize(ctx.ensemble.size());
  for (std::size_t j = 0; j < ctx.ensemble.size(); ++j) {
    d_[j].resize(n);
    lo2_[j].resize(n);
    hi2_[j].resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double vg = ctx.ensemble[j].magnitude(static_cast<double>(k) * dt_);
      d_[j][k] = vg * vg;
      const double lo = std::max(0.0, u_lo_ * vg - tol);
      const double hi = u_hi_ * vg + tol;
      lo2_[j][k] = lo * lo;
      hi2_[j][k] = hi * hi;
    }
  }
}

TrajectoryBatch::GainData TrajectoryBatch::prepare(const Gain& gain) const {
  // One RK4 step of de/dt = Mcl e is exactly the degree-4 Taylor polynomial
  // of exp(dt * Mcl); iterating it gives the sampled transition matrices.
  const Mat2 mcl = closed_loop_matrix(gain, pm_);
  const Mat2 h = dt_ * mcl;
  const Mat2 h2 = h * h;
  const Mat2 step = Mat2::identity() + h + (1.0 / 2.0) * h2 + (1.0 / 6.0) * (h2 * h) +
                    (1.0 / 24.0) * (h2 * h2);
  GainData gd;
  gd.g.resize(n_steps_ + 1);
  Mat2 phi = Mat2::identity();
  for (std::size_t k = 0; k <= n_steps_; ++k) {
    gd.g[k] = gain.k * phi - pm_.binv_a;
    phi = step * phi;
  }
  return gd;
}

SetpointVerdict TrajectoryBatch::check(const GainData& gd, const Setpoint& x_ref) const {
  const Vec2 xr = x_ref.vec();
  const std::size_t n_prof = d_.size();

  double min_lo = std::numeric_limits<double>::infinity();  // n2 - lo2
  double min_hi = std::numeric_limits<double>::infinity();  // hi2 - n2
  std::size_t lo_k = 0, lo_j = 0, hi_k = 0, hi_j = 0;
  double lo_n2 = 0.0, hi_n2 = 0.0;
  bool violated = false;

  const auto scan = [&](std::size_t k) {
    const Mat2& g = gd.g[k];
    const double ax = g.a * xr.x + g.b * xr.y;
    const double ay = g.c * xr.x + g.d * xr.y;
    const double ay2 = ay * ay;
    for (std::size_t j = 0; j < n_prof; ++j) {
      const double up = ax + d_[j][k];
      const double n2 = up * up + ay2;
      const double slo = n2 - lo2_[j][k];
      const double shi = hi2_[j][k] - n2;
      if (slo < min_lo) {
        min_lo = slo;
        lo_k = k;
        lo_j = j;
        lo_n2 = n2;
      }
      if (shi < min_hi) {
        min_hi = shi;
        hi_k = k;
        hi_j = j;
        hi_n2 = n2;
      }
      if (slo < 0.0 || shi < 0.0) {
        violated = true;
        return false;
      }
    }
    return true;
  };

  // Last sample first: steady-state violations surface without a full scan.
  bool keep = scan(n_steps_);
  for (std::size_t k = 0; keep && k < n_steps_; ++k) keep = scan(k);

  // Margins on the ||u|| scale at the binding samples (without the flagging
  // tolerance, matching trajectory_achievable's reported margins).
  SetpointVerdict verdict;
  const double m_lo = std::sqrt(lo_n2) - u_lo_ * std::sqrt(d_[lo_j][lo_k]);
  const double m_hi = u_hi_ * std::sqrt(d_[hi_j][hi_k]) - std::sqrt(hi_n2);
  verdict.margin = std::min(m_lo, m_hi);
  verdict.achievable = !violated;
  return verdict;
}

}  // namespace detail

namespace {

SetpointVerdict check_certificate(const Setpoint& sp, const Gain& gain,
                                  const PlantParams& params) {
  const CertificateVerdict v = check_setpoint(sp, gain, params);
  return {v.achievable, v.inconclusive, v.margin()};
}

SetpointVerdict check_steady_state(const Setpoint& sp, const PlantParams& params) {
  const SteadyStateReport r = steady_state_achievable(sp, params);
  return {r.achievable, false, r.worst_margin_v2};
}

struct GainScore {
  bool stabilizing = false;
  bool slow = false;
  bool scored = false;
  double rate = 0.0;
  int n_achievable = 0;
  int n_inconclusive = 0;
  double worst_margin = 0.0;
};

// Shared scoring core. `batch` may be null for non-trajectory checkers.
RateReport score_gain(const Gain& gain, const std::vector<Setpoint>& setpoints,
                      CheckerKind checker, const CheckContext& ctx,
                      const detail::TrajectoryBatch* batch, int threads) {
  RateReport rep;
  rep.gain = gain;
  rep.checker = checker;
  rep.n_total = static_cast<int>(setpoints.size());

  const PlantMatrices pm = plant_matrices(ctx.params);
  const StabilityReport stab = stability(gain, pm);
  rep.stabilizing = stab.stabilizing;
  if (!rep.stabilizing) {
    rep.flags.push_back("unstable");
    return rep;
  }
  if (checker == CheckerKind::kTrajectory &&
      ctx.horizon < 5.0 * stab.time_constant())
    throw std::invalid_argument(
        "achievability_rate: horizon shorter than 5 closed-loop time constants");

  rep.verdicts.resize(setpoints.size());
  detail::TrajectoryBatch::GainData gd;
  if (checker == CheckerKind::kTrajectory) gd = batch->prepare(gain);

  parallel_for(setpoints.size(), threads, [&](std::size_t i) {
    switch (checker) {
      case CheckerKind::kCertificate:
        rep.verdicts[i] = check_certificate(setpoints[i], gain, ctx.params);
        break;
      case CheckerKind::kSteadyState:
        rep.verdicts[i] = check_steady_state(setpoints[i], ctx.params);
        break;
      case CheckerKind::kTrajectory:
        rep.verdicts[i] = batch->check(gd, setpoints[i]);
        break;
    }
  });

  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (const SetpointVerdict& v : rep.verdicts) {
    if (v.achievable) ++rep.n_achievable;
    if (v.inconclusive) ++rep.n_inconclusive;
    rep.worst_margin = std::min(rep.worst_margin, v.margin);
  }
  rep.rate = rep.n_total > 0
                 ? static_cast<double>(rep.n_achievable) / static_cast<double>(rep.n_total)
                 : 0.0;
  if (rep.n_inconclusive > 0) rep.flags.push_back("inconclusive_setpoints");
  return rep;
}

}  // namespace

RateReport achievability_rate(const Gain& gain, const std::vector<Setpoint>& setpoints,
                              CheckerKind checker, const CheckContext& ctx,
                              int threads) {
  if (checker == CheckerKind::kTrajectory) {
    const detail::TrajectoryBatch batch(ctx);
    return score_gain(gain, setpoints, checker, ctx, &batch, threads);
  }
  return score_gain(gain, setpoints, checker, ctx, nullptr, threads);
}

OptimizeResult optimize_gain(const SamplingConfig& cfg, const CheckContext& ctx,
                             int threads, const std::vector<Gain>& extra_gains) {
  cfg.validate();
  OptimizeResult out;
  out.setpoints = sample_setpoints(cfg, /*stream_id=*/0);

  struct Candidate {
    long index;
    Gain gain;
  };
  std::vector<Candidate> candidates;
  if (cfg.include_zero_gain) candidates.push_back({-1, Gain::zero()});
  const CounterRng rng(cfg.seed, kStreamGains);
  for (long j = 0; j < cfg.n_gains; ++j) {
    const auto c = static_cast<std::uint64_t>(4 * j);
    Gain g;
    g.k = {rng.uniform(c, cfg.k_box[0], cfg.k_box[1]),
           rng.uniform(c + 1, cfg.k_box[0], cfg.k_box[1]),
           rng.uniform(c + 2, cfg.k_box[0], cfg.k_box[1]),
           rng.uniform(c + 3, cfg.k_box[0], cfg.k_box[1])};
    candidates.push_back({j, g});
  }
  for (std::size_t e = 0; e < extra_gains.size(); ++e)
    candidates.push_back({cfg.n_gains + static_cast<long>(e), extra_gains[e]});

  const detail::TrajectoryBatch* batch_ptr = nullptr;
  std::unique_ptr<detail::TrajectoryBatch> batch;
  if (cfg.checker == CheckerKind::kTrajectory) {
    batch = std::make_unique<detail::TrajectoryBatch>(ctx);
    batch_ptr = batch.get();
  }

  const PlantMatrices pm = plant_matrices(ctx.params);
  std::vector<SweepEntry> sweep(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const Candidate& cand = candidates[i];
    SweepEntry& entry = sweep[i];
    entry.index = cand.index;
    entry.gain = cand.gain;
    entry.n_total = static_cast<int>(out.setpoints.size());
    const StabilityReport stab = stability(cand.gain, pm);
    entry.stabilizing = stab.stabilizing;
    if (!entry.stabilizing) return;
    if (cfg.checker == CheckerKind::kTrajectory &&
        ctx.horizon < 5.0 * stab.time_constant()) {
      entry.slow = true;
      return;
    }
    const RateReport rep =
        score_gain(cand.gain, out.setpoints, cfg.checker, ctx, batch_ptr, 1);
    entry.scored = true;
    entry.rate = rep.rate;
    entry.n_achievable = rep.n_achievable;
    entry.worst_margin = rep.worst_margin;
  });

  long best = -1;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const SweepEntry& e = sweep[i];
    if (!e.stabilizing) ++out.n_unstable;
    if (e.slow) ++out.n_slow;
    if (!e.scored) continue;
    if (best < 0) {
      best = static_cast<long>(i);
      continue;
    }
    const SweepEntry& b = sweep[static_cast<std::size_t>(best)];
    const bool better =
        e.rate > b.rate ||
        (e.rate == b.rate &&
         (e.worst_margin > b.worst_margin ||
          (e.worst_margin == b.worst_margin &&
           (e.gain.frobenius() < b.gain.frobenius() ||
            (e.gain.frobenius() == b.gain.frobenius() && e.index < b.index)))));
    if (better) best = static_cast<long>(i);
  }
  if (best < 0)
    throw std::runtime_error("optimize_gain: no stabilizing candidate gain to score");

  out.sweep = std::move(sweep);
  out.best_index = out.sweep[static_cast<std::size_t>(best)].index;
  out.best = score_gain(out.sweep[static_cast<std::size_t>(best)].gain, out.setpoints,
                        cfg.checker, ctx, batch_ptr, threads);
  return out;
}

RegionMap map_region(const Gain& gain, const RegionGrid& grid, CheckerKind checker,
                     const CheckContext& ctx, int threads) {
  if (grid.n_p < 2 || grid.n_q < 2)
    throw std::invalid_argument("map_region: grid counts must be >= 2");
  if (!(grid.p_min <= grid.p_max) || !(grid.q_min <= grid.q_max))
    throw std::invalid_argument("map_region: grid ranges must be ordered");

  RegionMap map;
  map.grid = grid;
  map.checker = checker;
  map.gain = gain;
  map.cells.resize(static_cast<std::size_t>(grid.n_p) * grid.n_q);

  const PlantMatrices pm = plant_matrices(ctx.params);
  if (checker != CheckerKind::kSteadyState && !is_stabilizing(gain, pm))
    throw std::invalid_argument("map_region: gain is not stabilizing");

  std::unique_ptr<detail::TrajectoryBatch> batch;
  detail::TrajectoryBatch::GainData gd;
  if (checker == CheckerKind::kTrajectory) {
    const StabilityReport stab = stability(gain, pm);
    if (ctx.horizon < 5.0 * stab.time_constant())
      throw std::invalid_argument(
          "map_region: horizon shorter than 5 closed-loop time constants");
    batch = std::make_unique<detail::TrajectoryBatch>(ctx);
    gd = batch->prepare(gain);
  }

  parallel_for(map.cells.size(), threads, [&](std::size_t idx) {
    const int ip = static_cast<int>(idx) / grid.n_q;
    const int iq = static_cast<int>(idx) % grid.n_q;
    const Setpoint sp{
        grid.p_min + (grid.p_max - grid.p_min) * static_cast<double>(ip) / (grid.n_p - 1),
        grid.q_min + (grid.q_max - grid.q_min) * static_cast<double>(iq) / (grid.n_q - 1)};
    SetpointVerdict v;
    switch (checker) {
      case CheckerKind::kCertificate: v = check_certificate(sp, gain, ctx.params); break;
      case CheckerKind::kSteadyState: v = check_steady_state(sp, ctx.params); break;
      case CheckerKind::kTrajectory: v = batch->check(gd, sp); break;
    }
    map.cells[idx] = {sp.p_w, sp.q_var, v.achievable, v.inconclusive, v.margin};
  });
  return map;
}

}  // namespace vsi
