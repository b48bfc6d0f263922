#include "vsi/commands.hpp"

#include <filesystem>
#include <stdexcept>

#include "vsi/io.hpp"
#include "vsi/oracle.hpp"
#include "vsi/util.hpp"

namespace vsi {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// I/O failures carry a distinct exit code from configuration errors.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_json_file(const fs::path& path, const json& j) {
  try {
    atomic_write_file(path, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  } catch (const IoError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

void write_manifest(const fs::path& dir, const RunConfig& cfg,
                    const std::string& command, int threads) {
  write_json_file(dir / "manifest.json", manifest_json(cfg, command, threads));
}

json verdict_json(const Setpoint& sp, const SetpointVerdict& v, CheckerKind checker) {
  json j;
  j["p_ref"] = sp.p_w;
  j["q_ref"] = sp.q_var;
  j["checker"] = to_string(checker);
  j["achievable"] = v.achievable;
  j["margin"] = v.margin;
  j["flags"] = json::array();
  if (v.inconclusive) j["flags"].push_back("inconclusive");
  return j;
}

json trace_summary_json(const ConstraintTrace& trace, const Setpoint& x_ref) {
  json j;
  j["label"] = trace.profile_label;
  j["n_violations"] = trace.n_violations;
  j["worst_margin_v2"] = trace.worst_margin_v2;
  j["final_p_w"] = trace.p_w.back();
  j["final_q_var"] = trace.q_var.back();
  j["final_error_norm"] =
      std::hypot(trace.p_w.back() - x_ref.p_w, trace.q_var.back() - x_ref.q_var);
  return j;
}

void write_trace_csv(const fs::path& path, const ConstraintTrace& trace,
                     const PlantParams& params) {
  try {
    atomic_write_file(path, [&](std::ostream& os) {
      os << "t_s,p_w,q_var,u_p,u_q,vg_v,norm_u,lb,ub,lb_v2,ub_v2,violation\n";
      const std::string lb = format_double(params.u_lo_v);
      const std::string ub = format_double(params.u_hi_v);
      for (std::size_t k = 0; k < trace.t_s.size(); ++k) {
        os << format_double(trace.t_s[k]) << ',' << format_double(trace.p_w[k]) << ','
           << format_double(trace.q_var[k]) << ',' << format_double(trace.u_p[k]) << ','
           << format_double(trace.u_q[k]) << ',' << format_double(trace.vg_v[k]) << ','
           << format_double(trace.norm_u[k]) << ',' << lb << ',' << ub << ','
           << format_double(trace.lb_v2[k]) << ',' << format_double(trace.ub_v2[k]) << ','
           << int(trace.violation[k]) << '\n';
      }
    });
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace

int cmd_check(const RunConfig& cfg, double p_ref, double q_ref, int threads,
              std::ostream& out, std::ostream& err) {
  (void)threads;
  return run_guarded(err, [&]() -> int {
    const Setpoint sp{p_ref, q_ref};
    const CheckContext ctx = cfg.context();
    switch (cfg.sampling.checker) {
      case CheckerKind::kCertificate: {
        const CertificateVerdict v = check_setpoint(sp, cfg.gain, cfg.plant);
        json j;
        j["p_ref"] = sp.p_w;
        j["q_ref"] = sp.q_var;
        j["checker"] = "certificate";
        j["achievable"] = v.achievable;
        j["lambda1"] = v.lambda1 ? json(*v.lambda1) : json();
        j["lambda2"] = v.lambda2 ? json(*v.lambda2) : json();
        j["margin1"] = v.margin1;
        j["margin2"] = v.margin2;
        j["flags"] = v.flags;
        out << j.dump(2) << "\n";
        if (v.achievable) return kExitAchievable;
        return v.inconclusive ? kExitInconclusive : kExitUnachievable;
      }
      case CheckerKind::kSteadyState: {
        const SteadyStateReport r = steady_state_achievable(sp, cfg.plant);
        json j = verdict_json(sp, {r.achievable, false, r.worst_margin_v2},
                              CheckerKind::kSteadyState);
        j["worst_d"] = r.worst_d;
        out << j.dump(2) << "\n";
        return r.achievable ? kExitAchievable : kExitUnachievable;
      }
      case CheckerKind::kTrajectory: {
        const TrajectoryReport r =
            trajectory_achievable({0.0, 0.0}, sp, cfg.gain, cfg.plant, ctx.ensemble,
                                  ctx.dt, ctx.horizon);
        json j = verdict_json(sp, {r.achievable, false, r.worst_margin_v2},
                              CheckerKind::kTrajectory);
        j["profiles"] = json::array();
        for (const auto& trace : r.traces) {
          j["profiles"].push_back({{"label", trace.profile_label},
                                   {"n_violations", trace.n_violations},
                                   {"worst_margin_v2", trace.worst_margin_v2}});
        }
        out << j.dump(2) << "\n";
        return r.achievable ? kExitAchievable : kExitUnachievable;
      }
    }
    return kExitConfigError;
  });
}

int cmd_map(const RunConfig& cfg, int threads, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const CheckContext ctx = cfg.context();
    const RegionMap map =
        map_region(cfg.gain, cfg.grid, cfg.sampling.checker, ctx, threads);
    const fs::path dir = prepare_out_dir(cfg);
    const std::string checker = to_string(map.checker);
    try {
      atomic_write_file(dir / "region.csv", [&](std::ostream& os) {
        os << "p_ref_w,q_ref_var,achievable,margin,checker\n";
        for (const RegionCell& cell : map.cells) {
          os << format_double(cell.p_w) << ',' << format_double(cell.q_var) << ','
             << (cell.achievable ? 1 : 0) << ',' << format_double(cell.margin) << ','
             << checker << '\n';
        }
      });
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
    write_manifest(dir, cfg, "map", threads);
    return kExitOk;
  });
}

int cmd_optimize(const RunConfig& cfg, int threads, std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const CheckContext ctx = cfg.context();
    const OptimizeResult result = optimize_gain(cfg.sampling, ctx, threads);
    const fs::path dir = prepare_out_dir(cfg);

    try {
      atomic_write_file(dir / "sweep.jsonl", [&](std::ostream& os) {
        for (const SweepEntry& e : result.sweep) {
          json j;
          j["index"] = e.index;
          j["gain"] = gain_to_json(e.gain);
          j["stabilizing"] = e.stabilizing;
          j["slow"] = e.slow;
          j["scored"] = e.scored;
          j["rate"] = e.rate;
          j["n_achievable"] = e.n_achievable;
          j["n_total"] = e.n_total;
          j["worst_margin"] = e.worst_margin;
          os << j.dump() << "\n";
        }
      });
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }

    json best;
    best["gain"] = gain_to_json(result.best.gain);
    best["index"] = result.best_index;
    best["checker"] = to_string(result.best.checker);
    best["rate"] = result.best.rate;
    best["n_achievable"] = result.best.n_achievable;
    best["n_total"] = result.best.n_total;
    best["worst_margin"] = result.best.worst_margin;
    best["n_gains_sampled"] = cfg.sampling.n_gains;
    best["n_unstable"] = result.n_unstable;
    best["n_slow"] = result.n_slow;
    for (const SweepEntry& e : result.sweep) {
      if (e.index == -1 && e.scored) {
        best["baseline_rate"] = e.rate;
        if (e.rate > 0.0)
          best["improvement_pct"] = 100.0 * (result.best.rate - e.rate) / e.rate;
        break;
      }
    }
    write_json_file(dir / "best_gain.json", best);
    write_manifest(dir, cfg, "optimize", threads);
    return kExitOk;
  });
}

int cmd_simulate(const RunConfig& cfg, double p_ref, double q_ref, int threads,
                 std::ostream& err) {
  return run_guarded(err, [&]() -> int {
    const Setpoint sp{p_ref, q_ref};
    const CheckContext ctx = cfg.context();
    const TrajectoryReport rep = trajectory_achievable(
        {0.0, 0.0}, sp, cfg.gain, cfg.plant, ctx.ensemble, ctx.dt, ctx.horizon);
    const fs::path dir = prepare_out_dir(cfg);

    json summary;
    summary["p_ref"] = sp.p_w;
    summary["q_ref"] = sp.q_var;
    summary["gain"] = gain_to_json(cfg.gain);
    summary["achievable"] = rep.achievable;
    summary["worst_margin_v2"] = rep.worst_margin_v2;
    summary["profiles"] = json::array();
    for (std::size_t i = 0; i < rep.traces.size(); ++i) {
      const ConstraintTrace& trace = rep.traces[i];
      char idx[8];
      std::snprintf(idx, sizeof(idx), "%02zu", i);
      const std::string name = "trace_" + std::string(idx) + "_" + trace.profile_label + ".csv";
      write_trace_csv(dir / name, trace, cfg.plant);
      json pj = trace_summary_json(trace, sp);
      pj["csv"] = name;
      summary["profiles"].push_back(pj);
    }
    write_json_file(dir / "summary.json", summary);
    write_manifest(dir, cfg, "simulate", threads);
    return kExitOk;
  });
}

int cmd_dump_config(const RunConfig& cfg, std::ostream& out) {
  out << to_json(cfg).dump(2) << "\n";
  return kExitOk;
}

}  // namespace vsi
