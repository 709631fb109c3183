#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "support.hpp"
#include "wick/eikonal.hpp"

using namespace wick;
using namespace testing_support;

namespace {

// Average of f over all permutations of the four indices.
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

}  // namespace

TEST_CASE("flat metric gives an exactly quadratic jet") {
  auto adm = AdmField::flat(2, {1.0, 1.0, 1.0});
  const std::vector<double> y = {0.1, 0.2, 0.3};
  const double th = 0.9;
  auto sj = solve_eikonal_jets(make_jet(adm, y, 8), th, 8);
  for (int n = 3; n <= 7; ++n) CHECK(sj.sigma.max_abs_degree(n) == 0.0);
  const double dy[3] = {0.3, -0.2, 0.5};
  const Complex expect = -0.5 * kI * std::exp(Complex(0, th)) *
                         (-std::exp(Complex(0, -2 * th)) * 0.09 + 0.04 + 0.25);
  CHECK(std::abs(sj.evaluate(dy) - expect) < 1e-15);
  CHECK(std::abs(eikonal_residual(sj, adm, dy)) < 1e-15);
}

TEST_CASE("closed forms through order four") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int d = 1; d <= 2; ++d) {
    auto adm = random_adm(d, 50 + d);
    const int D = d + 1;
    for (int s = 0; s < 20; ++s) {
      std::vector<double> y(static_cast<std::size_t>(D));
      for (auto& v : y) v = u(rng);
      const double th = 0.3 + 0.12 * s;
      auto jets = make_jet(adm, y, 6);
      auto sj = solve_eikonal_jets(jets, th, 6);
      auto m = theta_metric_jets(jets, th);
      auto dg = [&](int a, int b, int r) { return poly_deriv(m.g[a][b], {r}); };
      auto ddg = [&](int a, int b, int r, int q) { return poly_deriv(m.g[a][b], {r, q}); };
      auto gi = [&](int a, int b) { return m.ginv[a][b].constant_term(); };
      double err2 = 0, err3 = 0, err4 = 0;
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) {
          const int ab[2] = {a, b};
          err2 = std::max(err2, std::abs(sj.s(ab) - m.g[a][b].constant_term()));
          for (int c = 0; c < D; ++c) {
            const int abc[3] = {a, b, c};
            const Complex sym = (dg(a, b, c) + dg(b, c, a) + dg(c, a, b)) / 3.0;
            err3 = std::max(err3, std::abs(sj.s(abc) + 1.5 * sym));
            for (int e = 0; e < D; ++e) {
              const int abce[4] = {a, b, c, e};
              const Complex closed = symmetrize4({a, b, c, e}, [&](int m1, int m2, int m3, int m4) {
                Complex t = 2.0 * ddg(m3, m4, m1, m2);
                for (int r = 0; r < D; ++r)
                  for (int q = 0; q < D; ++q) {
                    t += gi(r, q) * (-0.25 * dg(m1, m2, r) * dg(m3, m4, q) + dg(m1, m2, r) * dg(q, m4, m3) -
                                     dg(r, m2, m1) * dg(q, m4, m3));
                  }
                return t;
              });
              err4 = std::max(err4, std::abs(sj.s(abce) - closed));
            }
          }
        }
      CHECK(err2 < 1e-12);
      CHECK(err3 < 1e-10);
      CHECK(err4 < 1e-10);
    }
  }
}

TEST_CASE("residual Taylor coefficients vanish through the truncation order") {
  for (Frame f : {Frame::First, Frame::Second}) {
    auto adm = random_adm(1, 9);
    const std::vector<double> y = {0.3, 0.7};
    const int L = 10;
    auto jets = make_jet(adm, y, L);
    auto sj = solve_eikonal_jets(jets, 1.1, L, f);
    CHECK(eikonal_residual_taylor(sj, jets).max_abs() < 1e-10);
    const double zero[2] = {0.0, 0.0};
    CHECK(std::abs(eikonal_residual(sj, adm, zero)) == 0.0);
  }
}

TEST_CASE("residual scales like |dy|^L") {
  auto adm = curved_1p1(2 * kPi);
  const std::vector<double> y = {0.0, 0.4};
  for (Frame f : {Frame::First, Frame::Second}) {
    for (int L : {6, 10}) {
      auto sj = solve_eikonal_jets(make_jet(adm, y, L), kPi / 3, L, f);
      const double dir[2] = {0.6, 0.8};
      const auto rs = eikonal_residual_slope(sj, adm, dir, 0.05, 0.4, 12);
      CHECK(rs.used >= 4);
      CHECK(rs.slope >= L - 0.5);
    }
  }
}

TEST_CASE("coefficient derivatives match finite differences of the coefficients") {
  auto adm = random_adm(1, 31);
  const std::vector<double> y = {0.25, 0.55};
  const int L = 7;
  const double th = 0.8;
  auto sj = solve_eikonal_jets(make_jet(adm, y, L), th, L);
  const double h = 1e-4;
  for (int mu = 0; mu < 2; ++mu) {
    auto yp = y, ym = y;
    yp[mu] += h;
    ym[mu] -= h;
    auto sp = solve_eikonal_jets(make_jet(adm, yp, L), th, L);
    auto sm = solve_eikonal_jets(make_jet(adm, ym, L), th, L);
    TaylorPoly fd = (sp.sigma - sm.sigma) * Complex(1.0 / (2 * h));
    CHECK((fd - sj.base_derivs[mu]).max_abs() < 1e-6 * sj.base_derivs[mu].max_abs());
  }
}

TEST_CASE("Euclidean real data gives real coefficients and reruns are bit identical") {
  auto adm = random_adm(2, 13);
  const std::vector<double> y = {0.1, 0.9, 0.4};
  auto jets = make_jet(adm, y, 7);
  auto a = solve_eikonal_jets(jets, kPi / 2, 7);
  for (const auto& row : a.table()) CHECK(std::abs(row.value.imag()) < 1e-12);
  auto b = solve_eikonal_jets(jets, kPi / 2, 7);
  bool same = true;
  for (std::size_t i = 0; i < a.sigma.size(); ++i) same = same && a.sigma[i] == b.sigma[i];
  CHECK(same);
}

TEST_CASE("second frame coefficients alternate in sign at low order") {
  auto adm = random_adm(1, 77);
  const std::vector<double> y = {0.2, 0.35};
  auto jets = make_jet(adm, y, 6);
  auto first = solve_eikonal_jets(jets, 1.0, 5, Frame::First);
  auto second = solve_eikonal_jets(jets, 1.0, 5, Frame::Second);
  const int i2[2] = {0, 1}, i3[3] = {0, 1, 1};
  CHECK(std::abs(second.s(i2) - first.s(i2)) < 1e-13);
  CHECK(std::abs(second.s(i3) + first.s(i3)) < 1e-12);
}

TEST_CASE("real part cone") {
  auto flat = AdmField::flat(1, {1.0, 1.0});
  const std::vector<double> y = {0.0, 0.0};
  auto e = real_part_cone(solve_eikonal_jets(make_jet(flat, y, 4), kPi / 2, 4), flat, 0.1);
  CHECK(e.c_minus == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.c_plus == doctest::Approx(0.5).epsilon(1e-12));

  // Re(-i e^{i th} g) = diag(sin th ... ) in flat space: eigenvalues sin(th) and sin(th)
  const double th = 0.6;
  auto f = real_part_cone(solve_eikonal_jets(make_jet(flat, y, 4), th, 4), flat, 0.1);
  CHECK(f.form_min == doctest::Approx(0.5 * std::sin(th)));
  CHECK(f.c_minus == doctest::Approx(f.form_min).epsilon(1e-10));
  CHECK(f.c_plus == doctest::Approx(f.form_max).epsilon(1e-10));

  auto curved = random_adm(1, 3);
  auto c = real_part_cone(solve_eikonal_jets(make_jet(curved, y, 8), 1.2, 8), curved, 0.02);
  CHECK(std::abs(c.c_minus - c.form_min) < 0.1 * c.form_min);
  CHECK(c.c_minus <= c.c_plus);
}
