#pragma once

// Achievability certificate: one quadratic inequality in z = [d, P, Q]
// (the disturbance interval) must imply two others (the squared input-norm
// bounds along the closed loop). The implication is certified by a
// nonnegative multiplier lambda making the homogenized 4x4 matrix of
// (target - lambda * premise) positive semidefinite; feasibility is decided
// by maximizing the smallest eigenvalue over lambda, which is concave.

#include <optional>
#include <string>
#include <vector>

#include "vsi/controller.hpp"
#include "vsi/linalg.hpp"
#include "vsi/model.hpp"

namespace vsi {

/// z^T qmat z + rvec^T z + cscal over z = [d, P, Q].
struct QuadraticForm {
  Mat3 qmat;
  Vec3 rvec{};
  double cscal = 0.0;

  double evaluate(const Vec3& z) const;
};

/// Interval membership d in [vg_lo^2, vg_hi^2] as a quadratic in z1:
/// -(d - d_lo)(d - d_hi) >= 0.
QuadraticForm build_qa(const PlantParams& params);

struct QbPair {
  QuadraticForm lower;  // ||u||^2 - u_lo^2 d  >= 0
  QuadraticForm upper;  // u_hi^2 d - ||u||^2  >= 0
  Vec2 v;               // (K - B^{-1}A) x_ref; u = v - M z
};

/// Both input-bound quadratics for a setpoint/gain pair, built from
/// M = [B^{-1}E  K] (2x3) so that the control along the loop is u = v - Mz.
QbPair build_qb(const Setpoint& x_ref, const Gain& gain, const PlantParams& params);

/// Homogenized matrix [[Qb - l*Qa, (rb - l*ra)/2], [., cb - l*ca]].
Mat4 lmi_matrix(const QuadraticForm& qb, const QuadraticForm& qa, double lambda);

/// Smallest eigenvalue of a symmetric 4x4 via cyclic Jacobi. Rejects inputs
/// whose asymmetry exceeds 1e-12 relative to the matrix scale.
double min_eigenvalue(const Mat4& m);

struct SLemmaSearch {
  double lambda_max = 0.0;
  double tolerance = 1e-7;   // relative PSD slack: feasible iff
                             // margin >= -tolerance * (1 + max|H(lambda*)|)
  int prescan_points = 64;
  double bracket_width = 1e-8;
};

/// Default multiplier range: generous upper bound scaled to the problem,
/// 10 * (u_hi^2 + ||v||^2 / d_lo + 1).
SLemmaSearch default_search(const Setpoint& x_ref, const Gain& gain,
                            const PlantParams& params);

enum class Feasibility { kFeasible, kInfeasible, kInconclusive };

struct SLemmaResult {
  Feasibility status = Feasibility::kInfeasible;
  double lambda_star = 0.0;   // multiplier at the best margin found
  double margin = 0.0;        // best smallest eigenvalue found
  double tolerance_used = 0.0;
};

/// Concave maximization of lambda_min(H(lambda)) over [0, lambda_max]:
/// uniform pre-scan brackets the maximum, golden-section refines it to
/// `bracket_width`. If the pre-scan peaks at lambda_max and the verdict
/// would be infeasible, the result is inconclusive (enlarge lambda_max).
SLemmaResult s_lemma_feasible(const QuadraticForm& qb, const QuadraticForm& qa,
                              const SLemmaSearch& search);

struct CertificateVerdict {
  bool achievable = false;
  bool inconclusive = false;
  std::optional<double> lambda1;  // present iff the respective side is feasible
  std::optional<double> lambda2;
  double margin1 = 0.0;
  double margin2 = 0.0;
  std::vector<std::string> flags;

  double margin() const { return margin1 < margin2 ? margin1 : margin2; }
};

/// Runs both certificate sides for one setpoint. Requires a stabilizing
/// gain (throws std::invalid_argument otherwise); the certificate is only
/// meaningful for a stable closed loop.
CertificateVerdict check_setpoint(const Setpoint& x_ref, const Gain& gain,
                                  const PlantParams& params,
                                  const SLemmaSearch& search);
CertificateVerdict check_setpoint(const Setpoint& x_ref, const Gain& gain,
                                  const PlantParams& params);

}  // namespace vsi
