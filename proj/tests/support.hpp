#pragma once

#include <random>

#include "wick/geometry.hpp"
#include "wick/presets.hpp"

namespace testing_support {

using wick::random_adm;

}  // namespace testing_support

namespace testing_support {

using wick::curved_1p1;

// Exact partial derivative d^alpha p(0) from a Taylor polynomial.
inline wick::Complex poly_deriv(const wick::TaylorPoly& p, std::initializer_list<int> idx) {
  std::vector<int> v(idx);
  auto e = wick::exponent_from_indices(v, p.nvars());
  return p.coeff(e) * wick::exponent_factorial(e, p.nvars());
}

// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing_support

namespace testing_support {

// Second-order jet in two variables: value, gradient, Hessian.
struct J2 {
  double v = 0, g[2] = {0, 0}, h[2][2] = {{0, 0}, {0, 0}};
};
inline J2 operator+(J2 a, const J2& b) {
  a.v += b.v;
  for (int i = 0; i < 2; ++i) {
    a.g[i] += b.g[i];
    for (int j = 0; j < 2; ++j) a.h[i][j] += b.h[i][j];
  }
  return a;
}
inline J2 operator*(double s, J2 a) {
  a.v *= s;
  for (int i = 0; i < 2; ++i) {
    a.g[i] *= s;
    for (int j = 0; j < 2; ++j) a.h[i][j] *= s;
  }
  return a;
}
inline J2 operator-(const J2& a, const J2& b) { return a + (-1.0) * b; }
inline J2 operator*(const J2& a, const J2& b) {
  J2 c;
  c.v = a.v * b.v;
  for (int i = 0; i < 2; ++i) {
    c.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < 2; ++j)
      c.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
  }
  return c;
}
inline J2 inv(const J2& a) {
  J2 c;
  c.v = 1.0 / a.v;
  for (int i = 0; i < 2; ++i) {
    c.g[i] = -a.g[i] / (a.v * a.v);
    for (int j = 0; j < 2; ++j)
      c.h[i][j] = -a.h[i][j] / (a.v * a.v) + 2.0 * a.g[i] * a.g[j] / (a.v * a.v * a.v);
  }
  return c;
}
inline J2 constant(double c) {
  J2 a;
  a.v = c;
  return a;
}
// c0 + a cos(k x) in the spatial variable (index 1).
inline J2 cos_field(double c0, double a, double k, double x) {
  J2 f;
  f.v = c0 + a * std::cos(k * x);
  f.g[1] = -a * k * std::sin(k * x);
  f.h[1][1] = -a * k * k * std::cos(k * x);
  return f;
}

// Scalar curvature of a 2D metric from Christoffel symbols and the Ricci tensor.
inline double scalar_curvature(const J2 g[2][2]) {
  const J2 det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const J2 idet = inv(det);
  J2 gi[2][2];
  gi[0][0] = g[1][1] * idet;
  gi[1][1] = g[0][0] * idet;
  gi[0][1] = gi[1][0] = (-1.0) * g[0][1] * idet;
  // Gamma^a_{bc} and its first derivatives.
  double G[2][2][2], dG[2][2][2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        G[a][b][c] = 0;
        for (int e = 0; e < 2; ++e) dG[a][b][c][e] = 0;
        for (int d = 0; d < 2; ++d) {
          const double t = g[d][c].g[b] + g[d][b].g[c] - g[b][c].g[d];
          G[a][b][c] += 0.5 * gi[a][d].v * t;
          for (int e = 0; e < 2; ++e) {
            const double dt = g[d][c].h[b][e] + g[d][b].h[c][e] - g[b][c].h[d][e];
            dG[a][b][c][e] += 0.5 * (gi[a][d].g[e] * t + gi[a][d].v * dt);
          }
        }
      }
  // R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
  double ric[2][2] = {{0, 0}, {0, 0}};
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d)
      for (int a = 0; a < 2; ++a) {
        const int c = a;
        double r = dG[a][d][b][c] - dG[a][c][b][d];
        for (int e = 0; e < 2; ++e) r += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b];
        ric[b][d] += r;
      }
  double R = 0;
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d) R += gi[b][d].v * ric[b][d];
  return R;
}


}  // namespace testing_support

namespace testing_support {

// Scalar curvature of curved_1p1(period) on the Euclidean branch at spatial x.
inline double curved_1p1_curvature(double period, double x) {
  const double k = 2 * wick::kPi / period;
  const J2 N = cos_field(1.0, 0.2, k, x);
  J2 g[2][2];
  g[0][0] = N * N;
  g[1][1] = cos_field(1.0, 0.3, k, x);
  g[0][1] = g[1][0] = constant(0.0);
  return scalar_curvature(g);
}

}  // namespace testing_support
