#include "wick/oracles.hpp"

#include <algorithm>
#include <array>

namespace wick {

namespace {

Complex pderiv(const TaylorPoly& p, std::initializer_list<int> idx) {
  std::vector<int> v(idx);
  const auto e = exponent_from_indices(v, p.nvars());
  return p.coeff(e) * exponent_factorial(e, p.nvars());
}

template <class F>
Complex symmetrize4(std::array<int, 4> idx, F f) {
  std::array<int, 4> p = {0, 1, 2, 3};
  Complex sum = 0.0;
  int count = 0;
  do {
    sum += f(idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]);
    ++count;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum / static_cast<double>(count);
}

// Value, gradient and Hessian in (t, x).
struct J2 {
  double v = 0, g[2] = {0, 0}, h[2][2] = {{0, 0}, {0, 0}};
};
J2 operator+(J2 a, const J2& b) {
  a.v += b.v;
  for (int i = 0; i < 2; ++i) {
    a.g[i] += b.g[i];
    for (int j = 0; j < 2; ++j) a.h[i][j] += b.h[i][j];
  }
  return a;
}
J2 operator*(const J2& a, const J2& b) {
  J2 c;
  c.v = a.v * b.v;
  for (int i = 0; i < 2; ++i) {
    c.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < 2; ++j) c.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
  }
  return c;
}
J2 scale(double s, J2 a) {
  a.v *= s;
  for (int i = 0; i < 2; ++i) {
    a.g[i] *= s;
    for (int j = 0; j < 2; ++j) a.h[i][j] *= s;
  }
  return a;
}
J2 inv(const J2& a) {
  J2 c;
  c.v = 1.0 / a.v;
  for (int i = 0; i < 2; ++i) {
    c.g[i] = -a.g[i] / (a.v * a.v);
    for (int j = 0; j < 2; ++j) c.h[i][j] = -a.h[i][j] / (a.v * a.v) + 2.0 * a.g[i] * a.g[j] / (a.v * a.v * a.v);
  }
  return c;
}
J2 field(const FourierSeries& f, std::span<const double> y, std::span<const double> periods) {
  const TaylorPoly p = f.jet(y, periods, 2);
  J2 j;
  j.v = p.constant_term().real();
  for (int a = 0; a < 2; ++a) {
    j.g[a] = pderiv(p, {a}).real();
    for (int b = 0; b < 2; ++b) j.h[a][b] = pderiv(p, {a, b}).real();
  }
  return j;
}

double curvature(const J2 g[2][2]) {
  const J2 idet = inv(g[0][0] * g[1][1] + scale(-1.0, g[0][1] * g[1][0]));
  J2 gi[2][2];
  gi[0][0] = g[1][1] * idet;
  gi[1][1] = g[0][0] * idet;
  gi[0][1] = gi[1][0] = scale(-1.0, g[0][1] * idet);
  double G[2][2][2] = {}, dG[2][2][2][2] = {};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) {
          const double t = g[d][c].g[b] + g[d][b].g[c] - g[b][c].g[d];
          G[a][b][c] += 0.5 * gi[a][d].v * t;
          for (int e = 0; e < 2; ++e) {
            const double dt = g[d][c].h[b][e] + g[d][b].h[c][e] - g[b][c].h[d][e];
            dG[a][b][c][e] += 0.5 * (gi[a][d].g[e] * t + gi[a][d].v * dt);
          }
        }
  double R = 0;
  for (int b = 0; b < 2; ++b)
    for (int d = 0; d < 2; ++d) {
      double ric = 0;
      for (int a = 0; a < 2; ++a) {
        ric += dG[a][d][b][a] - dG[a][a][b][d];
        for (int e = 0; e < 2; ++e) ric += G[a][a][e] * G[e][d][b] - G[a][d][e] * G[e][a][b];
      }
      R += gi[b][d].v * ric;
    }
  return R;
}

}  // namespace

EikonalClosedForm eikonal_closed_form_deviation(const AdmField& adm, double theta, std::span<const double> y) {
  const int D = adm.dim();
  const auto jets = make_jet(adm, y, 6);
  const auto sj = solve_eikonal_jets(jets, theta, 6);
  const auto m = theta_metric_jets(jets, theta);
  auto dg = [&](int a, int b, int r) { return pderiv(m.g[a][b], {r}); };
  auto ddg = [&](int a, int b, int r, int q) { return pderiv(m.g[a][b], {r, q}); };
  auto gi = [&](int a, int b) { return m.ginv[a][b].constant_term(); };
  EikonalClosedForm out;
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      const int ab[2] = {a, b};
      out.order2 = std::max(out.order2, std::abs(sj.s(ab) - m.g[a][b].constant_term()));
      for (int c = 0; c < D; ++c) {
        const int abc[3] = {a, b, c};
        const Complex sym = (dg(a, b, c) + dg(b, c, a) + dg(c, a, b)) / 3.0;
        out.order3 = std::max(out.order3, std::abs(sj.s(abc) + 1.5 * sym));
        for (int e = 0; e < D; ++e) {
          const int abce[4] = {a, b, c, e};
          const Complex closed = symmetrize4({a, b, c, e}, [&](int m1, int m2, int m3, int m4) {
            Complex t = 2.0 * ddg(m3, m4, m1, m2);
            for (int r = 0; r < D; ++r)
              for (int q = 0; q < D; ++q)
                t += gi(r, q) * (-0.25 * dg(m1, m2, r) * dg(m3, m4, q) + dg(m1, m2, r) * dg(q, m4, m3) -
                                 dg(r, m2, m1) * dg(q, m4, m3));
            return t;
          });
          out.order4 = std::max(out.order4, std::abs(sj.s(abce) - closed));
        }
      }
    }
  return out;
}

double euclidean_scalar_curvature_1p1(const AdmField& adm, std::span<const double> y) {
  if (adm.d != 1) throw InvalidGeometry("curvature oracle is for 1+1 data");
  const J2 N = field(adm.lapse, y, adm.periods);
  const J2 S = field(adm.shift[0], y, adm.periods);
  const J2 gh = field(adm.spatial(0, 0), y, adm.periods);
  J2 g[2][2];
  g[0][0] = N * N + gh * S * S;
  g[0][1] = g[1][0] = gh * S;
  g[1][1] = gh;
  return curvature(g);
}

double seeley_dewitt_a1(const AdmField& adm, std::span<const double> y) {
  return euclidean_scalar_curvature_1p1(adm, y) / 6.0 - adm.potential.value(y, adm.periods);
}

}  // namespace wick
