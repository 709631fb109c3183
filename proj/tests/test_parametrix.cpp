#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "wick/parametrix.hpp"

using namespace wick;
using namespace testing_support;

TEST_CASE("free heat kernel on the Euclidean branch") {
  auto adm = AdmField::flat(1, {1.0, 1.0});
  const std::vector<double> yp = {0.1, 0.2};
  auto m = build_parametrix(adm, kPi / 2, 2, yp);
  for (double z : {0.01, 0.3, 2.0}) {
    auto e = eval_parametrix(m, z, yp);
    CHECK(std::abs(e.value - 1.0 / (4 * kPi * z)) < 1e-14 / z);
    const std::vector<double> y = {0.25, 0.1};
    const double r2 = 0.15 * 0.15 + 0.1 * 0.1;
    auto g = eval_parametrix(m, z, y);
    CHECK(std::abs(g.value - std::exp(-r2 / (4 * z)) / (4 * kPi * z)) < 1e-14 / z);
  }
}

TEST_CASE("constant potential reproduces the truncated exponential") {
  const double V = 0.6;
  auto adm = AdmField::flat(1, {1.0, 1.0}, V);
  auto free = AdmField::flat(1, {1.0, 1.0});
  const std::vector<double> yp = {0.0, 0.0}, y = {0.05, -0.03};
  for (double th : {kPi / 2, 1.0, 0.5}) {
    const Complex q = kI * std::exp(Complex(0, -th));
    for (int N : {1, 3}) {
      auto m = build_parametrix(adm, th, N, yp);
      auto f = build_parametrix(free, th, N, yp);
      std::vector<double> zs, err;
      for (double z = 0.02; z <= 0.16; z *= 2) {
        const Complex ratio = eval_parametrix(m, z, y).value / eval_parametrix(f, z, y).value;
        Complex trunc = 0.0, term = 1.0;
        for (int n = 0; n <= N; ++n) {
          trunc += term;
          term *= -q * V * z / double(n + 1);
        }
        CHECK(std::abs(ratio - trunc) < 1e-12);
        zs.push_back(z);
        err.push_back(std::abs(ratio - std::exp(-q * V * z)));
      }
      CHECK(std::abs(loglog_slope(zs, err) - (N + 1)) < 0.1);
    }
  }
}

TEST_CASE("flat residual vanishes identically") {
  for (double V : {0.0, 0.4}) {
    auto adm = AdmField::flat(1, {1.0, 1.0}, V);
    const std::vector<double> yp = {0.0, 0.0}, y = {0.04, 0.07};
    for (int N : {0, 2}) {
      auto m = build_parametrix(adm, 0.8, N, yp);
      const double z = 0.01;
      const Complex r = heat_residual(m, adm, z, y);
      const Complex scale = eval_parametrix(m, z, y).dzeta;
      // With V the truncated sum leaves exactly the Z_N term.
      const Complex q = kI * std::exp(Complex(0, -0.8));
      Complex expect = 0.0;
      if (V != 0.0) {
        double fact = 1.0;
        for (int n = 1; n <= N; ++n) fact *= n;
        expect = eval_parametrix(build_parametrix(AdmField::flat(1, {1.0, 1.0}), 0.8, N, yp), z, y).value * q * V *
                 std::pow(-q * V * z, N) / fact;
      }
      CHECK(std::abs(r - expect) < 1e-12 * std::abs(scale));
    }
  }
}

TEST_CASE("analytic zeta derivative matches central differences") {
  auto adm = curved_1p1(2 * kPi, 0.3);
  const std::vector<double> yp = {0.1, 0.4}, y = {0.13, 0.35};
  for (double th : {kPi / 2, 1.1}) {
    auto m = build_parametrix(adm, th, 2, yp);
    for (double z : {0.05, 0.2}) {
      const double h = 1e-3 * z;
      auto f = [&](double zz) { return eval_parametrix(m, zz, y).value; };
      const Complex fd = (-f(z + 2 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2 * h)) / (12 * h);
      const Complex an = eval_parametrix(m, z, y).dzeta;
      CHECK(std::abs(fd - an) < 1e-9 * std::abs(an));
    }
  }
}

TEST_CASE("chain-rule residual agrees with the XYZ assembly") {
  auto adm = random_adm(1, 17);
  const std::vector<double> yp = {0.3, 0.6}, y = {0.33, 0.58};
  for (double th : {kPi / 2, 0.7}) {
    auto m = build_parametrix(adm, th, 1, yp);
    for (double z : {0.01, 0.05}) {
      const Complex a = heat_residual(m, adm, z, y);
      const Complex b = heat_residual_xyz(m, adm, z, y);
      CHECK(std::abs(a - b) < 1e-8 * std::abs(eval_parametrix(m, z, y).dzeta));
    }
  }
}

TEST_CASE("residual in the scaled regime follows the predicted power") {
  auto adm = curved_1p1(2 * kPi, 0.2);
  const std::vector<double> yp = {0.0, 0.4};
  const double zdir[2] = {0.7, 0.5};
  for (double th : {kPi / 2, 1.0}) {
    for (int N : {1, 2}) {
      auto m = build_parametrix(adm, th, N, yp);
      std::vector<double> zs, rs;
      for (double z = 1e-4; z <= 1.0001e-2; z *= std::sqrt(10.0)) {
        const double sz = std::sqrt(z);
        const std::vector<double> y = {yp[0] + sz * zdir[0], yp[1] + sz * zdir[1]};
        zs.push_back(z);
        rs.push_back(std::abs(heat_residual(m, adm, z, y)));
      }
      const double predicted = N - 1.0;  // N - (d+1)/2
      CHECK(std::abs(loglog_slope(zs, rs) - predicted) < 0.5);
    }
  }
}

TEST_CASE("predicted diagonal series") {
  auto flat = AdmField::flat(1, {1.0, 1.0});
  const std::vector<double> y = {0.2, 0.7};
  auto c = predicted_diagonal_series(flat, 0.9, 3, y);
  CHECK(std::abs(c[0] - 1.0) < 1e-15);
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(c[n]) < 1e-14);

  const double V = 0.45, th = 0.9;
  const Complex q = kI * std::exp(Complex(0, -th));
  auto cv = predicted_diagonal_series(AdmField::flat(1, {1.0, 1.0}, V), th, 3, y);
  Complex term = 1.0;
  for (int n = 0; n <= 3; ++n) {
    CHECK(std::abs(cv[n] - term) < 1e-12);
    term *= -q * V / double(n + 1);
  }

  // Euclidean branch: coefficients real and c_1 = R/6 - V.
  const double P = 2 * kPi;
  auto adm = curved_1p1(P, 0.25);
  for (double x : {0.0, 0.9, 2.0}) {
    const std::vector<double> yy = {0.0, x};
    auto e = predicted_diagonal_series(adm, kPi / 2, 2, yy);
    for (auto v : e) CHECK(std::abs(v.imag()) < 1e-12);
    CHECK(std::abs(e[1].real() - (curved_1p1_curvature(P, x) / 6.0 - 0.25)) < 1e-10);
  }
}

TEST_CASE("sector and cone errors") {
  auto adm = curved_1p1(2 * kPi);
  const std::vector<double> yp = {0.0, 0.0};
  auto m = build_parametrix(adm, 0.6, 1, yp);
  CHECK_NOTHROW(eval_parametrix(m, std::polar(0.1, 0.5), yp));
  CHECK_THROWS_AS(eval_parametrix(m, std::polar(0.1, 0.7), yp), ContractViolation);
  CHECK_THROWS_AS(eval_parametrix(m, 0.0, yp), ContractViolation);
  // Far outside the chart the truncated Synge polynomial loses positivity.
  bool threw = false;
  for (double r = 0.5; r < 20 && !threw; r *= 1.5) {
    for (int k = 0; k < 16 && !threw; ++k) {
      const std::vector<double> y = {r * std::cos(k * kPi / 8), r * std::sin(k * kPi / 8)};
      try {
        eval_parametrix(m, 0.1, y);
      } catch (const OutsideCone& e) {
        threw = true;
        CHECK(std::string(e.code()) == "outside-cone");
      }
    }
  }
  CHECK(threw);
}

namespace {

// Trapezoid sum of F(y, y') psi(y) rho(y) over y in a square about y'.
Complex weak_pairing(const ParametrixModel& m, const AdmField& adm, double zeta, double radius, int n,
                     double (*psi)(double, double)) {
  const double h = 2 * radius / n;
  Complex sum = 0.0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double dt = -radius + i * h, dx = -radius + j * h;
      const double cut = smooth_cutoff(std::hypot(dt, dx), radius);
      if (cut == 0.0) continue;
      const std::vector<double> y = {m.base()[0] + dt, m.base()[1] + dx};
      const double rho = build_theta_metric(adm, kPi / 2, y).density;
      sum += eval_parametrix(m, zeta, y).value * psi(dt, dx) * cut * rho * h * h;
    }
  return sum;
}

}  // namespace

TEST_CASE("parametrix tends to the weighted delta with an O(zeta) error") {
  auto adm = curved_1p1(2 * kPi, 0.1);
  const std::vector<double> yp = {0.0, 0.5};
  auto psi = +[](double t, double x) { return 1.0 + 0.3 * t + 0.5 * std::sin(x) + 0.2 * t * x; };
  // psi times the bump equals 1 at y'.
  for (double th : {kPi / 2, 1.2}) {
    auto m = build_parametrix(adm, th, 1, yp);
    std::vector<double> zs, err;
    for (double z : {0.004, 0.002, 0.001}) {
      zs.push_back(z);
      err.push_back(std::abs(weak_pairing(m, adm, z, 1.0, 200, psi) - 1.0));
    }
    CHECK(err.back() < 0.01);
    CHECK(loglog_slope(zs, err) > 0.8);
  }
}

TEST_CASE("parametrix operator is asymptotically isometric") {
  auto adm = curved_1p1(2 * kPi, 0.1);
  const double h = 0.02, R = 0.7, rpsi = 0.4;
  const int n = static_cast<int>(std::lround(2 * R / h));
  struct Node {
    double t, x, rho, psi;
  };
  std::vector<Node> nodes;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double t = -R + i * h, x = 0.5 - R + j * h;
      const std::vector<double> y = {t, x};
      nodes.push_back({t, x, build_theta_metric(adm, kPi / 2, y).density,
                       smooth_cutoff(std::hypot(t, x - 0.5), rpsi) * (1.0 + 0.5 * t)});
    }
  double psi2 = 0.0;
  for (const auto& a : nodes) psi2 += a.psi * a.psi * a.rho * h * h;
  for (double th : {kPi / 2, 1.0}) {
    std::vector<ParametrixModel> models;
    std::vector<const Node*> src;
    for (const auto& a : nodes)
      if (a.psi != 0.0) {
        const std::vector<double> yp = {a.t, a.x};
        models.push_back(build_parametrix(adm, th, 0, yp));
        src.push_back(&a);
      }
    std::vector<double> dev;
    for (double z : {0.004, 0.002, 0.001}) {
      double out2 = 0.0;
      for (const auto& b : nodes) {
        Complex u = 0.0;
        const std::vector<double> y = {b.t, b.x};
        for (std::size_t k = 0; k < models.size(); ++k) {
          const double r = std::hypot(b.t - src[k]->t, b.x - src[k]->x);
          if (r > 0.3) continue;
          u += eval_parametrix(models[k], z, y).value * src[k]->psi * src[k]->rho * h * h;
        }
        out2 += std::norm(u) * b.rho * h * h;
      }
      dev.push_back(std::abs(std::sqrt(out2 / psi2) - 1.0));
    }
    MESSAGE("theta " << th << " deviations " << dev[0] << " " << dev[1] << " " << dev[2]);
    CHECK(dev[2] < dev[1]);
    CHECK(dev[1] < dev[0]);
    CHECK(loglog_slope({0.004, 0.002, 0.001}, dev) > 0.8);
  }
}
