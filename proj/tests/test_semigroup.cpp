#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "support.hpp"
#include "wick/semigroup.hpp"

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

// exp(2 pi i (k0 t / Lt + k x / Lx)) on the grid, and its flat symbol.
CVector fourier_mode(const TorusGrid& g, int k0, int k) {
  CVector v(g.total());
  for (int i = 0; i < g.total(); ++i) {
    const auto m = g.multi(i);
    v[i] = std::exp(Complex(0, 2 * kPi * (double(k0) * m[0] / g.sizes[0] + double(k) * m[1] / g.sizes[1])));
  }
  return v;
}

Complex flat_symbol(const TorusGrid& g, double th, int k0, int k, double V) {
  const double st = 4 * std::pow(std::sin(kPi * k0 / g.sizes[0]), 2) / std::pow(g.spacing(0), 2);
  const double sx = 4 * std::pow(std::sin(kPi * k / g.sizes[1]), 2) / std::pow(g.spacing(1), 2);
  return kI * std::exp(Complex(0, th)) * st - kI * std::exp(Complex(0, -th)) * (sx + V);
}

AdmField curved24() {
  auto adm = curved_1p1(2 * kPi, 0.3);
  adm.shift[0].add_mode({{0, 1}, 0.2, 0.0});
  return adm;
}

}  // namespace

TEST_CASE("dense evolution: identity at zero, Fourier modes, positivity") {
  auto flat = AdmField::flat(1, {1.0, 1.0}, 0.2);
  TorusGrid g({12, 10}, flat.periods);
  auto op = assemble_delta_theta(g, flat, 0.8);
  const CVector psi = random_vector(g.total(), 1);
  CHECK((evolve_dense(op, 0.0, psi).state - psi).norm() == 0.0);
  for (auto [k0, k] : {std::pair{1, 2}, std::pair{3, -4}, std::pair{0, 5}}) {
    const CVector v = fourier_mode(g, k0, k);
    const Complex z(0.03, 0.01);
    const CVector out = evolve_dense(op, z, v).state;
    const CVector expect = std::exp(z * flat_symbol(g, 0.8, k0, k, 0.2)) * v;
    CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
  auto heat = assemble_delta_theta(g, AdmField::flat(1, {1.0, 1.0}), kPi / 2);
  CVector pos(g.total());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (auto& x : pos) x = u(rng) < 0.2 ? u(rng) : 0.0;
  for (double s : {1e-4, 1e-3, 0.05}) CHECK(evolve_dense(heat, s, pos).state.real().minCoeff() >= -1e-12);
  CHECK_THROWS_AS(evolve_dense(op, 0.1, psi, 100), ContractViolation);
}

TEST_CASE("contour route agrees with the dense exponential") {
  auto flat = AdmField::flat(1, {1.0, 1.0});
  TorusGrid g({32, 32}, flat.periods);
  auto op = assemble_delta_theta(g, flat, kPi / 4);
  const CVector psi = random_vector(g.total(), 3);
  const auto c = evolve_contour(op, 0.1, psi, 48);
  const CVector d = evolve_dense(op, 0.1, psi).state;
  const double rel = weighted_norm(op.weights, c.state - d) / weighted_norm(op.weights, d);
  MESSAGE("32x32 flat, 48 nodes: relative error " << rel << ", model " << c.error_estimate << ", embedded "
                                                  << c.embedded_difference);
  CHECK(rel <= 1e-8);
  CHECK(weighted_norm(op.weights, c.state - d) <= std::max(c.error_estimate, c.embedded_difference));
}

TEST_CASE("doubling the quadrature points gains at least a factor ten") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 4);
  const CVector psi = random_vector(g.total(), 4);
  const Complex z(0.05, 0.02);
  const CVector d = evolve_dense(op, z, psi).state;
  double prev = INFINITY;
  for (int n : {16, 32}) {
    const double e = weighted_norm(op.weights, evolve_contour(op, z, psi, n).state - d);
    MESSAGE(n << " nodes: error " << e);
    CHECK(e <= prev / 10);
    prev = e;
  }
}

TEST_CASE("strong continuity at zero") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  auto op = assemble_delta_theta(g, adm, 1.0);
  // smooth data so the approach is visible at moderate zeta
  CVector psi(g.total());
  for (int i = 0; i < g.total(); ++i) {
    const auto y = g.coords(i);
    psi[i] = std::cos(y[0]) + std::sin(2 * y[1]);
  }
  std::vector<Complex> zs = {0.1, 0.01, 0.001, 1e-4};
  auto res = evolve_contour_many(op, zs, psi, 64);
  double prev = INFINITY;
  for (const auto& r : res) {
    const double e = weighted_norm(op.weights, r.state - psi);
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 1e-3 * weighted_norm(op.weights, psi));
}

TEST_CASE("contour contract errors") {
  auto flat = AdmField::flat(1, {1.0, 1.0});
  TorusGrid g({8, 8}, flat.periods);
  auto op = assemble_delta_theta(g, flat, 0.5);
  const CVector psi = random_vector(g.total(), 5);
  CHECK_THROWS_AS(evolve_contour(op, std::polar(0.1, 0.6), psi, 32), ContractViolation);
  CHECK_THROWS_AS(evolve_contour(op, 0.1, psi, 8), ContractViolation);
  CHECK_THROWS_AS(evolve_contour(assemble_delta_theta(g, flat, std::nullopt), 0.1, psi, 32), ContractViolation);
  CHECK((evolve_contour(op, 0.0, psi, 32).state - psi).norm() == 0.0);
}

TEST_CASE("resolvent norm oracles") {
  auto flat = AdmField::flat(1, {1.0, 1.0}, 0.3);
  TorusGrid g({10, 8}, flat.periods);
  const double th = 0.9;
  auto op = assemble_delta_theta(g, flat, th);
  std::vector<Complex> spec;
  for (int k0 = 0; k0 < 10; ++k0)
    for (int k = 0; k < 8; ++k) spec.push_back(flat_symbol(g, th, k0, k, 0.3));
  for (Complex lam : {Complex(5, 1), Complex(-3, 40), Complex(0.5, -2), Complex(-200, 10)}) {
    double dist = INFINITY;
    for (auto s : spec) dist = std::min(dist, std::abs(lam - s));
    auto r = resolvent_norm(op, lam);
    CHECK(r.converged);
    CHECK(std::abs(r.norm * dist - 1.0) < 1e-8);
  }
  auto heat = assemble_delta_theta(g, flat, kPi / 2);
  for (double lam : {0.1, 2.0, 50.0}) {
    auto r = resolvent_norm(heat, lam);
    CHECK(r.norm <= 1.0 / lam * (1 + 1e-12));
    CHECK(r.norm * (lam + 0.3) == doctest::Approx(1.0).epsilon(1e-8));
  }
  // Dense cross-check on a curved non-normal operator.
  auto adm = curved24();
  TorusGrid gc({12, 12}, adm.periods);
  auto oc = assemble_delta_theta(gc, adm, 0.6);
  const Complex lam(0.2, 3.0);
  const CMatrix R = (lam * CMatrix::Identity(oc.size(), oc.size()) - to_dense(oc)).inverse();
  CHECK(resolvent_norm(oc, lam).norm == doctest::Approx(weighted_opnorm(oc.weights, R)).epsilon(1e-8));
}

TEST_CASE("resolvent bounds on the two sectors") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  const double th = kPi / 4, tt = theta_tilde(th), ttp = 0.5 * tt;
  auto op = assemble_delta_theta(g, adm, th);
  std::vector<Complex> inner, outer;
  for (int k = 0; k < 10; ++k) {
    const double r = std::pow(10.0, -1.0 + 0.4 * k);
    for (double f : {-0.9, -0.4, 0.0, 0.5, 0.95}) {
      inner.push_back(std::polar(r, f * tt));
      outer.push_back(std::polar(r, (f >= 0 ? 1 : -1) * (kPi / 2 + ttp) * (0.2 + 0.8 * std::abs(f))));
    }
  }
  for (const auto& s : resolvent_norm_scan(op, inner)) CHECK(s.norm <= (1 + 1e-8) / std::abs(s.lambda));
  const double C = 1.1 / std::sin(tt - ttp);
  for (const auto& s : resolvent_norm_scan(op, outer)) CHECK(s.norm <= C / std::abs(s.lambda));
}

TEST_CASE("semigroup contract suite on a curved operator") {
  auto adm = curved24();
  TorusGrid g({24, 24}, adm.periods);
  const double th = kPi / 4;
  auto op = assemble_delta_theta(g, adm, th);
  auto adj = assemble_delta_theta(g, adm, kPi - th);
  std::vector<CVector> psis = {random_vector(g.total(), 10), random_vector(g.total(), 11)};
  auto rep = semigroup_contract_suite(op, adj, 0.05, Complex(0.05, 0.02), psis, 0);
  MESSAGE("law " << rep.semigroup_law << " norm " << rep.max_norm << " adjoint " << rep.adjoint_law << " contour "
                 << rep.contour_vs_dense << " generator slope " << rep.generator_slope);
  CHECK(rep.semigroup_law <= 1e-10);
  CHECK(rep.contractive());
  CHECK(rep.adjoint_law <= 1e-10);
  CHECK(rep.contour_vs_dense <= 1e-8);
  CHECK(rep.generator_slope == doctest::Approx(1.0).epsilon(0.1));
  for (int n = 0; n < 3; ++n) {
    CHECK(std::isfinite(rep.power_norm[n]));
    CHECK(rep.power_norm[n] <= rep.power_bound[n] * (1 + 1e-10));
  }
  CHECK_THROWS_AS(semigroup_contract_suite(op, op, 0.05, 0.05, psis), ContractViolation);
}

TEST_CASE("Euclidean heat flow is an exact contraction") {
  auto adm = curved24();
  TorusGrid g({16, 16}, adm.periods);
  auto op = assemble_delta_theta(g, adm, kPi / 2);
  for (double s : {0.01, 0.3}) CHECK(weighted_opnorm(op.weights, dense_propagator(op, s)) <= 1.0 + 1e-12);
}

TEST_CASE("zgeev agrees with the Eigen eigensolver") {
  auto adm = curved24();
  TorusGrid g({8, 8}, adm.periods);
  const CMatrix A = to_dense(assemble_delta_theta(g, adm, 1.1));
  auto ev = dense_eigenvalues(A);
  Eigen::ComplexEigenSolver<CMatrix> es(A, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double best = INFINITY;
    for (auto e : ev) best = std::min(best, std::abs(e - es.eigenvalues()[i]));
    CHECK(best < 1e-10 * (1 + std::abs(es.eigenvalues()[i])));
  }
}
