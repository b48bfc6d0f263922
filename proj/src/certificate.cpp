#include "vsi/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace vsi {

namespace {

// Columns of M = [B^{-1}E  K] as 2-vectors.
struct MCols {
  Vec2 c0, c1, c2;
};

MCols m_columns(const Gain& gain, const PlantMatrices& pm) {
  return {pm.binv_e, {gain.k.a, gain.k.c}, {gain.k.b, gain.k.d}};
}

}  // namespace

double QuadraticForm::evaluate(const Vec3& z) const {
  const Vec3 qz = qmat * z;
  double s = cscal;
  for (int i = 0; i < 3; ++i) s += (qz[i] + rvec[i]) * z[i];
  return s;
}

QuadraticForm build_qa(const PlantParams& params) {
  QuadraticForm qa;
  qa.qmat(0, 0) = -1.0;
  qa.rvec = {params.d_lo() + params.d_hi(), 0.0, 0.0};
  qa.cscal = -params.d_lo() * params.d_hi();
  return qa;
}

QbPair build_qb(const Setpoint& x_ref, const Gain& gain, const PlantParams& params) {
  const PlantMatrices pm = plant_matrices(params);
  const MCols m = m_columns(gain, pm);
  const Vec2 v = gain.k * x_ref.vec() - pm.binv_a * x_ref.vec();

  Mat3 mtm;  // M^T M
  const Vec2 cols[3] = {m.c0, m.c1, m.c2};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) mtm(i, j) = dot(cols[i], cols[j]);

  Vec3 mtv;  // M^T v
  for (int i = 0; i < 3; ++i) mtv[i] = dot(cols[i], v);

  const double u_lo_sq = params.u_lo_v * params.u_lo_v;
  const double u_hi_sq = params.u_hi_v * params.u_hi_v;

  QbPair out;
  out.v = v;
  out.lower.qmat = mtm;
  out.lower.rvec = {-2.0 * mtv[0] - u_lo_sq, -2.0 * mtv[1], -2.0 * mtv[2]};
  out.lower.cscal = dot(v, v);
  out.upper.qmat = -1.0 * mtm;
  out.upper.rvec = {2.0 * mtv[0] + u_hi_sq, 2.0 * mtv[1], 2.0 * mtv[2]};
  out.upper.cscal = -dot(v, v);
  return out;
}

Mat4 lmi_matrix(const QuadraticForm& qb, const QuadraticForm& qa, double lambda) {
  Mat4 h;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) h(i, j) = qb.qmat(i, j) - lambda * qa.qmat(i, j);
    const double r = 0.5 * (qb.rvec[i] - lambda * qa.rvec[i]);
    h(i, 3) = r;
    h(3, i) = r;
  }
  h(3, 3) = qb.cscal - lambda * qa.cscal;
  return h;
}

double min_eigenvalue(const Mat4& m) {
  const double scale = std::max(1.0, m.max_abs());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw std::invalid_argument("min_eigenvalue: matrix is not symmetric");
  return jacobi_eigen(m).eigenvalues[0];
}

SLemmaSearch default_search(const Setpoint& x_ref, const Gain& gain,
                            const PlantParams& params) {
  const QbPair qb = build_qb(x_ref, gain, params);
  SLemmaSearch s;
  s.lambda_max = 10.0 * (params.u_hi_v * params.u_hi_v +
                         dot(qb.v, qb.v) / params.d_lo() + 1.0);
  return s;
}

SLemmaResult s_lemma_feasible(const QuadraticForm& qb, const QuadraticForm& qa,
                              const SLemmaSearch& search) {
  if (!(search.lambda_max > 0.0))
    throw std::invalid_argument("s_lemma_feasible: lambda_max must be > 0");

  const auto eval = [&](double lambda) { return min_eigenvalue(lmi_matrix(qb, qa, lambda)); };

  // Uniform pre-scan to bracket the concave maximum.
  const int n = std::max(2, search.prescan_points);
  double best_lambda = 0.0;
  double best_margin = eval(0.0);
  int best_index = 0;
  for (int i = 1; i < n; ++i) {
    const double lambda = search.lambda_max * static_cast<double>(i) / (n - 1);
    const double margin = eval(lambda);
    if (margin > best_margin) {
      best_margin = margin;
      best_lambda = lambda;
      best_index = i;
    }
  }
  const bool peak_at_edge = best_index == n - 1;

  // Golden-section refinement inside the bracketing interval.
  const double step = search.lambda_max / (n - 1);
  double a = std::max(0.0, best_lambda - step);
  double b = std::min(search.lambda_max, best_lambda + step);
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  while (b - a > search.bracket_width) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    }
    if (f1 > best_margin) {
      best_margin = f1;
      best_lambda = x1;
    }
    if (f2 > best_margin) {
      best_margin = f2;
      best_lambda = x2;
    }
  }

  SLemmaResult res;
  res.lambda_star = best_lambda;
  res.margin = best_margin;
  res.tolerance_used =
      search.tolerance * (1.0 + lmi_matrix(qb, qa, best_lambda).max_abs());
  if (best_margin >= -res.tolerance_used) {
    res.status = Feasibility::kFeasible;
  } else if (peak_at_edge) {
    res.status = Feasibility::kInconclusive;
  } else {
    res.status = Feasibility::kInfeasible;
  }
  return res;
}

CertificateVerdict check_setpoint(const Setpoint& x_ref, const Gain& gain,
                                  const PlantParams& params,
                                  const SLemmaSearch& search) {
  const PlantMatrices pm = plant_matrices(params);
  if (!is_stabilizing(gain, pm))
    throw std::invalid_argument("check_setpoint: gain is not stabilizing");

  const QuadraticForm qa = build_qa(params);
  const QbPair qb = build_qb(x_ref, gain, params);
  const SLemmaResult r1 = s_lemma_feasible(qb.lower, qa, search);
  const SLemmaResult r2 = s_lemma_feasible(qb.upper, qa, search);

  CertificateVerdict verdict;
  verdict.margin1 = r1.margin;
  verdict.margin2 = r2.margin;
  if (r1.status == Feasibility::kFeasible) verdict.lambda1 = r1.lambda_star;
  if (r2.status == Feasibility::kFeasible) verdict.lambda2 = r2.lambda_star;
  verdict.achievable = r1.status == Feasibility::kFeasible &&
                       r2.status == Feasibility::kFeasible;

  // A conclusive infeasibility on either side settles the conjunction;
  // otherwise an inconclusive side makes the verdict inconclusive.
  const bool any_infeasible = r1.status == Feasibility::kInfeasible ||
                              r2.status == Feasibility::kInfeasible;
  if (!verdict.achievable && !any_infeasible) {
    verdict.inconclusive = true;
    verdict.flags.push_back("inconclusive: enlarge lambda_max");
  }
  if (r1.status == Feasibility::kInconclusive) verdict.flags.push_back("p1_bracket_at_lambda_max");
  if (r2.status == Feasibility::kInconclusive) verdict.flags.push_back("p2_bracket_at_lambda_max");
  return verdict;
}

CertificateVerdict check_setpoint(const Setpoint& x_ref, const Gain& gain,
                                  const PlantParams& params) {
  return check_setpoint(x_ref, gain, params, default_search(x_ref, gain, params));
}

}  // namespace vsi
