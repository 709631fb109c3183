#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wick/kernel_lab.hpp"
#include "wick/dense.hpp"
#include "wick/transport.hpp"

using namespace wick;
using namespace testing_support;

namespace {

CVector random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVector v(n);
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  return v;
}

AdmField curved24() {
  auto adm = curved_1p1(2 * kPi, 0.3);
  adm.shift[0].add_mode({{0, 1}, 0.2, 0.0});
  return adm;
}

// (1/L) sum_k exp(-zeta 4 sin^2(pi k/n)/h^2): one factor of the flat lattice heat kernel diagonal.
double lattice_heat_1d(int n, double period, double zeta) {
  const double h = period / n;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += std::exp(-zeta * 4 * std::pow(std::sin(kPi * k / n), 2) / (h * h));
  return s / period;
}

double periodized_gaussian_1d(double period, double zeta) {
  double s = 0.0;
  for (int m = -20; m <= 20; ++m) s += std::exp(-std::pow(m * period, 2) / (4 * zeta));
  return s / std::sqrt(4 * kPi * zeta);
}

// zeta_j = 25 h^2 2^{j/4}: pairs four apart differ by a factor of two.
std::vector<double> halving_window(double h) {
  std::vector<double> z;
  for (int j = 0; j < 6; ++j) z.push_back(25 * h * h * std::pow(2.0, j / 4.0));
  return z;
}

std::vector<DiagonalSeries> diagonal_levels(const AdmField& adm, double theta, const std::vector<double>& zs,
                                            std::vector<int> sizes) {
  const std::vector<double> y = {0.0, 0.0};
  std::vector<DiagonalSeries> out;
  for (int n : sizes) out.push_back(kernel_diagonal(assemble_delta_theta(TorusGrid({n, n}, adm.periods), adm, theta), y, zs));
  return out;
}

}  // namespace

TEST_CASE("kernel reproduces the evolution, pairs Hermitian, and both routes agree") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  const double th = kPi / 4;
  auto op = assemble_delta_theta(g, adm, th);
  auto adj = assemble_delta_theta(g, adm, kPi - th);
  const Complex z(0.05, 0.02);
  const auto k = build_kernel(op, z);
  const CVector psi = random_vector(g.total(), 3);
  const CVector direct = evolve_dense(op, z, psi).state;
  CHECK((apply_kernel(k, psi) - direct).norm() / direct.norm() < 1e-10);
  CHECK(hermiticity_deviation(k, build_kernel(adj, std::conj(z))) < 1e-10);
  const auto kc = build_kernel_contour(op, z);
  CHECK((kc.entries - k.entries).cwiseAbs().maxCoeff() / k.entries.cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(build_kernel(op, z, 100), ContractViolation);
}

TEST_CASE("flat heat kernel diagonal: lattice Fourier sum and continuum Gaussian") {
  const double L = 1.0;
  auto flat = AdmField::flat(1, {L, L});
  for (int n : {16, 24}) {
    TorusGrid g({n, n}, flat.periods);
    auto op = assemble_delta_theta(g, flat, kPi / 2);
    const double z = 0.01;
    const auto k = build_kernel(op, z);
    const double exact = std::pow(lattice_heat_1d(n, L, z), 2);
    for (int i : {0, 17, g.total() - 1}) CHECK(std::abs(k.entries(i, i) - exact) / exact < 1e-12);
  }
  // Continuum agreement improves at O(h^2 / zeta).
  const double z = 0.01, cont = std::pow(periodized_gaussian_1d(L, z), 2);
  const double e1 = std::abs(std::pow(lattice_heat_1d(64, L, z), 2) - cont) / cont;
  const double e2 = std::abs(std::pow(lattice_heat_1d(128, L, z), 2) - cont) / cont;
  CHECK(e1 < 0.02);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(std::abs(cont * 4 * kPi * z - 1.0) < 1e-10);
}

TEST_CASE("Chapman-Kolmogorov on the curved grid") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 4);
  const Complex z1(0.05, 0.01), z2(0.03, -0.005);
  const double dev = chapman_kolmogorov_deviation(build_kernel(op, z1), build_kernel(op, z2), build_kernel(op, z1 + z2));
  CHECK(dev < 1e-9);
}

TEST_CASE("heat equation residual is differencing error") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 3);
  const auto r1 = heat_equation_residual(op, 0.1, 2e-3);
  const auto r2 = heat_equation_residual(op, 0.1, 1e-3);
  CHECK(r1.residual / r2.residual == doctest::Approx(4.0).epsilon(0.05));
  CHECK(r1.residual <= 1.05 * r1.differencing_bound);
  auto heat = assemble_delta_theta(g, adm, kPi / 2);
  const auto rh = heat_equation_residual(heat, 0.1, 1e-3);
  CHECK(rh.max_imag < 1e-13 * rh.residual + 1e-300);
  CHECK_THROWS_AS(heat_equation_residual(op, build_kernel(op, 0.1), build_kernel(op, 0.11), build_kernel(op, 0.13)),
                  ContractViolation);
}

TEST_CASE("weighted row sums reproduce smooth data as zeta shrinks") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 4);
  CVector psi(g.total());
  for (int i = 0; i < g.total(); ++i) {
    const auto c = g.coords(i);
    psi[i] = std::cos(c[0]) + 0.5 * std::sin(c[1]);
  }
  std::vector<double> zs = {0.08, 0.04, 0.02, 0.01, 0.005}, err;
  for (double z : zs) err.push_back(weighted_norm(op.weights, apply_kernel(build_kernel(op, z), psi) - psi));
  for (std::size_t i = 1; i < err.size(); ++i) CHECK(err[i] < err[i - 1]);
  CHECK(loglog_slope(zs, err) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("diagonal asymptotics on the curved example at the Euclidean angle") {
  auto adm = curved_1p1(1.0);
  const std::vector<double> y = {0.0, 0.0};
  const double th = kPi / 2;
  const auto zs = halving_window(1.0 / 64);
  const auto levels = diagonal_levels(adm, th, zs, {32, 64, 128});
  const auto r = richardson(levels);
  CHECK(r.observed_order == doctest::Approx(2.0).epsilon(0.1));

  const auto fit = fit_diagonal_asymptotics(r, adm, th, y, 2);
  CHECK(fit.deviation[0] < 0.02);
  CHECK(fit.deviation[1] < 0.05);
  CHECK(std::abs(fit.predicted[1] - curved_1p1_curvature(1.0, 0.0) / 6) < 1e-8);

  const auto r1 = difference_to_parametrix(r, adm, th, 1, y);
  const auto r3 = difference_to_parametrix(r, adm, th, 3, y);
  CHECK(r1.exponent >= 1.5);
  CHECK(r1.meets_weak_bound);
  CHECK_FALSE(r1.super_polynomial);
  // Halving zeta divides the remainder by about 2^p.
  for (int j = 0; j + 4 < static_cast<int>(zs.size()); ++j)
    CHECK(r1.remainder[j + 4] / r1.remainder[j] == doctest::Approx(std::pow(2.0, r1.exponent)).epsilon(0.2));
  // At N0 = 1 the gap to F^3 is the zeta^2 term, up to the N = 3 remainder.
  const auto t = build_transport(adm, th, 3, y);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double z = zs[i];
    const double gap = std::abs(t.solution.diagonal[2] * z * z + t.solution.diagonal[3] * z * z * z);
    CHECK(std::abs(r1.remainder[i] - gap) <= r3.remainder[i] * 1.01);
    CHECK(r3.remainder[i] < r1.remainder[i]);
  }
}

TEST_CASE("diagonal fit on flat data") {
  const std::vector<double> y = {0.0, 0.0};
  const auto zs = default_fit_window(1.0 / 64, 1.0, 8);
  SUBCASE("V = 0: unit leading term, floor-level remainder") {
    auto flat = AdmField::flat(1, {1.0, 1.0});
    const auto r = richardson(diagonal_levels(flat, kPi / 2, zs, {64, 128}));
    const auto fit = fit_diagonal_asymptotics(r, flat, kPi / 2, y, 2);
    CHECK(std::abs(fit.fitted[0] - 1.0) < 0.01);
    CHECK(std::abs(fit.fitted[1]) < 0.05);
    CHECK(difference_to_parametrix(r, flat, kPi / 2, 0, y).super_polynomial);
  }
  SUBCASE("constant V, theta = pi/3: first coefficient is -V") {
    const double V = 0.5, th = kPi / 3;
    auto flat = AdmField::flat(1, {1.0, 1.0}, V);
    const auto r = richardson(diagonal_levels(flat, th, zs, {64, 128}));
    const auto fit = fit_diagonal_asymptotics(r, flat, th, y, 2);
    CHECK(std::abs(fit.fitted[1] / fit.fitted[0] + V) < 0.02 * V);
  }
}

TEST_CASE("fit window errors") {
  CHECK_THROWS_AS(default_fit_window(1.0 / 32, 1.0, 8), FitWindowError);
  CHECK_THROWS_AS(default_fit_window(1.0 / 64, 1.0, 1), FitWindowError);
  RichardsonSeries s;
  for (int i = 0; i < 6; ++i) {
    s.zeta.push_back(0.01 * (1 + 1e-7 * i));
    s.value.push_back(1.0 / (4 * kPi * s.zeta.back()));
    s.error_estimate.push_back(0.0);
  }
  auto flat = AdmField::flat(1, {1.0, 1.0});
  const std::vector<double> y = {0.0, 0.0};
  CHECK_THROWS_AS(fit_diagonal_asymptotics(s, flat, kPi / 2, y, 2), FitWindowError);
  s.zeta.resize(3), s.value.resize(3), s.error_estimate.resize(3);
  CHECK_THROWS_AS(fit_diagonal_asymptotics(s, flat, kPi / 2, y, 2), FitWindowError);
}

TEST_CASE("smoothing exponents from white noise") {
  auto adm = curved_1p1(1.0);
  const int n = 32;
  TorusGrid g({n, n}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 4);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  CVector noise(g.total());
  for (auto& x : noise) x = nd(rng);
  const double h = 1.0 / n;
  std::vector<double> zs;
  for (int j = 0; j < 10; ++j) zs.push_back(4 * h * h * std::pow(0.1 / (4 * h * h), j / 9.0));
  const auto fits = smoothing_rate_probe(op, noise, zs, 2);
  CHECK(fits[0].sigma_m == 1);
  CHECK(fits[1].sigma_m == 2);
  CHECK(fits[2].sigma_m == 2);
  for (const auto& f : fits) CHECK(f.exponent <= f.sigma_m + 0.5);
  CHECK(fits[0].exponent < fits[1].exponent);
  CHECK(fits[1].exponent < fits[2].exponent);

  CVector smooth(g.total());
  for (int i = 0; i < g.total(); ++i) {
    const auto c = g.coords(i);
    smooth[i] = std::cos(2 * kPi * c[0]) + std::sin(2 * kPi * c[1]);
  }
  for (const auto& f : smoothing_rate_probe(op, smooth, zs, 2)) {
    const double start = cm_surrogate(g, smooth, f.m);
    for (double v : f.norm) CHECK(v <= 1.05 * start);
  }
}
