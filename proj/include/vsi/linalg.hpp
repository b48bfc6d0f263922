#pragma once

// Small fixed-size linear algebra used throughout: 2-vectors / 2x2 matrices
// for the plant and controller, NxN symmetric eigenproblems (N = 4 for the
// certificate LMIs) via cyclic Jacobi rotations.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace vsi {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator-(Vec2 v) { return {-v.x, -v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

/// Row-major 2x2 matrix [[a, b], [c, d]].
struct Mat2 {
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 scaled_identity(double s) { return {s, 0.0, 0.0, s}; }

  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  Mat2 transpose() const { return {a, c, b, d}; }

  double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

  Vec2 operator*(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

  Mat2 inverse() const {
    const double de = det();
    if (de == 0.0) throw std::domain_error("Mat2::inverse: singular matrix");
    return {d / de, -b / de, -c / de, a / de};
  }
};

inline Mat2 operator+(Mat2 l, Mat2 r) { return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d}; }
inline Mat2 operator-(Mat2 l, Mat2 r) { return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d}; }
inline Mat2 operator*(double s, Mat2 m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }
inline Mat2 operator*(Mat2 l, Mat2 r) {
  return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
          l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

/// Row-major NxN matrix backed by a flat array.
template <std::size_t N>
struct SquareMat {
  std::array<double, N * N> m{};

  double& operator()(std::size_t i, std::size_t j) { return m[i * N + j]; }
  double operator()(std::size_t i, std::size_t j) const { return m[i * N + j]; }

  static SquareMat identity() {
    SquareMat out;
    for (std::size_t i = 0; i < N; ++i) out(i, i) = 1.0;
    return out;
  }

  double frobenius() const {
    double s = 0.0;
    for (double v : m) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (double v : m) s = std::max(s, std::abs(v));
    return s;
  }

  double off_diagonal_norm() const {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        if (i != j) s += (*this)(i, j) * (*this)(i, j);
    return std::sqrt(s);
  }

  std::array<double, N> operator*(const std::array<double, N>& v) const {
    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += (*this)(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }
};

template <std::size_t N>
inline SquareMat<N> operator+(const SquareMat<N>& l, const SquareMat<N>& r) {
  SquareMat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = l.m[i] + r.m[i];
  return out;
}

template <std::size_t N>
inline SquareMat<N> operator-(const SquareMat<N>& l, const SquareMat<N>& r) {
  SquareMat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = l.m[i] - r.m[i];
  return out;
}

template <std::size_t N>
inline SquareMat<N> operator*(double s, const SquareMat<N>& r) {
  SquareMat<N> out;
  for (std::size_t i = 0; i < N * N; ++i) out.m[i] = s * r.m[i];
  return out;
}

using Mat3 = SquareMat<3>;
using Mat4 = SquareMat<4>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

template <std::size_t N>
struct JacobiResult {
  std::array<double, N> eigenvalues{};  // ascending
  SquareMat<N> eigenvectors;            // columns, aligned with eigenvalues
  int sweeps = 0;
};

/// Cyclic Jacobi for symmetric matrices. Sweeps until the off-diagonal
/// Frobenius norm drops below 1e-12 * max(1, ||A||_F), capped at `max_sweeps`.
template <std::size_t N>
JacobiResult<N> jacobi_eigen(SquareMat<N> a, int max_sweeps = 50) {
  JacobiResult<N> res;
  res.eigenvectors = SquareMat<N>::identity();
  const double tol = 1e-12 * std::max(1.0, a.frobenius());

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (a.off_diagonal_norm() < tol) break;
    res.sweeps = sweep + 1;
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tol / static_cast<double>(N * N)) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = aip - s * (aiq + tau * aip);
          a(p, i) = a(i, p);
          a(i, q) = aiq + s * (aip - tau * aiq);
          a(q, i) = a(i, q);
        }
        for (std::size_t i = 0; i < N; ++i) {
          const double vip = res.eigenvectors(i, p);
          const double viq = res.eigenvectors(i, q);
          res.eigenvectors(i, p) = vip - s * (viq + tau * vip);
          res.eigenvectors(i, q) = viq + s * (vip - tau * viq);
        }
      }
    }
  }

  std::array<std::size_t, N> order{};
  for (std::size_t i = 0; i < N; ++i) order[i] = i;
  for (std::size_t i = 0; i < N; ++i) {
    std::size_t best = i;
    for (std::size_t j = i + 1; j < N; ++j)
      if (a(order[j], order[j]) < a(order[best], order[best])) best = j;
    std::swap(order[i], order[best]);
  }
  SquareMat<N> sorted_vecs;
  for (std::size_t i = 0; i < N; ++i) {
    res.eigenvalues[i] = a(order[i], order[i]);
    for (std::size_t r = 0; r < N; ++r) sorted_vecs(r, i) = res.eigenvectors(r, order[i]);
  }
  res.eigenvectors = sorted_vecs;
  return res;
}

}  // namespace vsi
