#pragma once

// Test-only oracles and generators, kept independent of the library paths
// they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "vsi/linalg.hpp"
#include "vsi/rng.hpp"

namespace vsi::testing {

inline Mat4 random_symmetric4(const CounterRng& rng, std::uint64_t base) {
  Mat4 m;
  std::uint64_t c = base;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      const double v = rng.uniform(c++, -1.0, 1.0);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

/// det(A - x I) for 4x4 by cofactor expansion.
inline double char_poly4(const Mat4& a, double x) {
  double b[4][4];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) b[i][j] = a(i, j) - (i == j ? x : 0.0);

  const auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
    return b[r0][c0] * (b[r1][c1] * b[r2][c2] - b[r1][c2] * b[r2][c1]) -
           b[r0][c1] * (b[r1][c0] * b[r2][c2] - b[r1][c2] * b[r2][c0]) +
           b[r0][c2] * (b[r1][c0] * b[r2][c1] - b[r1][c1] * b[r2][c0]);
  };
  return b[0][0] * det3(1, 2, 3, 1, 2, 3) - b[0][1] * det3(1, 2, 3, 0, 2, 3) +
         b[0][2] * det3(1, 2, 3, 0, 1, 3) - b[0][3] * det3(1, 2, 3, 0, 1, 2);
}

/// All four eigenvalues of a symmetric 4x4 as bisection roots of the
/// characteristic polynomial. Brackets come from a sign-change scan over the
/// Gershgorin interval; returns an empty vector if the scan does not isolate
/// four simple roots (practically impossible for random matrices).
inline std::vector<double> charpoly_bisection_eigenvalues(const Mat4& a) {
  double lo = a(0, 0), hi = a(0, 0);
  for (int i = 0; i < 4; ++i) {
    double radius = 0.0;
    for (int j = 0; j < 4; ++j)
      if (i != j) radius += std::abs(a(i, j));
    lo = std::min(lo, a(i, i) - radius);
    hi = std::max(hi, a(i, i) + radius);
  }
  lo -= 1.0;
  hi += 1.0;

  for (int n_grid : {4096, 65536}) {
    std::vector<std::pair<double, double>> brackets;
    double x_prev = lo;
    double f_prev = char_poly4(a, lo);
    for (int i = 1; i <= n_grid; ++i) {
      const double x = lo + (hi - lo) * static_cast<double>(i) / n_grid;
      const double f = char_poly4(a, x);
      if ((f_prev < 0.0 && f > 0.0) || (f_prev > 0.0 && f < 0.0))
        brackets.emplace_back(x_prev, x);
      x_prev = x;
      f_prev = f;
    }
    if (brackets.size() != 4) continue;
    std::vector<double> roots;
    for (auto [bl, bh] : brackets) {
      double fl = char_poly4(a, bl);
      for (int it = 0; it < 200 && bh - bl > 1e-13; ++it) {
        const double mid = 0.5 * (bl + bh);
        const double fm = char_poly4(a, mid);
        if ((fl < 0.0) == (fm < 0.0)) {
          bl = mid;
          fl = fm;
        } else {
          bh = mid;
        }
      }
      roots.push_back(0.5 * (bl + bh));
    }
    std::sort(roots.begin(), roots.end());
    return roots;
  }
  return {};
}

}  // namespace vsi::testing
