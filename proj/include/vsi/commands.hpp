#pragma once

// CLI command implementations, callable in-process. Exit codes:
//   0 achievable / success, 1 unachievable, 2 inconclusive,
//   3 configuration error, 4 I/O error.

#include <ostream>

#include "vsi/config.hpp"

namespace vsi {

inline constexpr int kExitAchievable = 0;
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnachievable = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitConfigError = 3;
inline constexpr int kExitIoError = 4;

int cmd_check(const RunConfig& cfg, double p_ref, double q_ref, int threads,
              std::ostream& out, std::ostream& err);
int cmd_map(const RunConfig& cfg, int threads, std::ostream& err);
int cmd_optimize(const RunConfig& cfg, int threads, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, double p_ref, double q_ref, int threads,
                 std::ostream& err);
int cmd_dump_config(const RunConfig& cfg, std::ostream& out);

}  // namespace vsi
