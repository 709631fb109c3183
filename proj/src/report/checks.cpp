#include "checks.hpp"

#include <cstdio>
#include <random>

#include "wick/oracles.hpp"
#include "wick/parametrix.hpp"
#include "wick/transport.hpp"

namespace wick::checks {

std::string fmt(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::string tag(double theta) {
  char b[32];
  std::snprintf(b, sizeof b, "th=%.4f", theta);
  return b;
}

namespace {

CVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVector v(n);
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  return v;
}

std::string name(const std::string& label, const std::string& what) { return label + ": " + what; }

}  // namespace

SuiteReport spectrum(const TorusGrid& grid, const AdmField& adm, double theta, const Tolerances& tol,
                     std::optional<double> flat_potential, const std::string& label) {
  SuiteReport r;
  const auto op = assemble_delta_theta(grid, adm, theta);
  if (op.size() > kDenseThreshold) throw SizeLimitExceeded("dense spectrum needs at most 4096 nodes");
  const auto eig = dense_eigenvalues_refined(to_dense(op));
  double scale = 0.0;
  for (auto z : eig) scale = std::max(scale, std::abs(z));
  const double alpha = kPi / 2 + theta_tilde(theta);
  r.verdicts.push_back(leq(name(label, "wedge " + tag(theta)), sector_angular_excess(eig, alpha, 1e-12 * scale),
                           tol.wedge, "angular excess over " + std::to_string(eig.size()) + " eigenvalues"));
  if (std::abs(theta - kPi / 2) < 1e-12) {
    double im = 0.0, re = -INFINITY;
    for (auto z : eig) im = std::max(im, std::abs(z.imag())), re = std::max(re, z.real());
    r.verdicts.push_back(leq(name(label, "real nonpositive spectrum"), std::max(im, re) / scale, tol.wedge,
                             "max(|Im|, max Re) / max|lambda|"));
  }
  if (flat_potential) {
    r.verdicts.push_back(leq(name(label, "Fourier multiset " + tag(theta)),
                             multiset_distance(eig, flat_spectrum(grid, *flat_potential, theta)), tol.spectrum));
  }
  Table t{"spectrum", {"theta", "re", "im"}, {}};
  for (auto z : eig) t.rows.push_back({theta, z.real(), z.imag()});
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport numerical_range(const LatticeOperator& op, unsigned seed, const Tolerances& tol, const std::string& label) {
  SuiteReport r;
  const auto rep = numerical_range_probe(op, 200, seed, {}, tol.wedge);
  r.verdicts.push_back(leq(name(label, "numerical range " + tag(*op.theta)), rep.max_relative, tol.wedge,
                           "relative distance of 200 Rayleigh quotients from C \\ Sigma"));
  Table t{"numerical_range", {"theta", "re", "im"}, {}};
  for (auto q : rep.quotients) t.rows.push_back({*op.theta, q.real(), q.imag()});
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport resolvent(const LatticeOperator& op, int samples, unsigned seed, const Tolerances& tol,
                      const std::string& label) {
  SuiteReport r;
  const double th = *op.theta, tt = theta_tilde(th), ttp = 0.5 * tt;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Complex> inner, outer;
  for (int k = 0; k < samples; ++k) {
    const double rad = std::pow(10.0, -1.0 + 4.0 * u(rng));
    inner.push_back(std::polar(rad, (2 * u(rng) - 1) * 0.999 * tt));
    const double rad2 = std::pow(10.0, -1.0 + 4.0 * u(rng));
    outer.push_back(std::polar(rad2, (2 * u(rng) - 1) * 0.999 * (kPi / 2 + ttp)));
  }
  const auto si = resolvent_norm_scan(op, inner);
  const auto so = resolvent_norm_scan(op, outer);
  const double C = tol.sector_constant / std::sin(tt - ttp);
  double worst_i = 0.0, worst_o = 0.0;
  Table t{"resolvent", {"theta", "sector", "re", "im", "norm", "bound", "converged"}, {}};
  for (const auto& s : si) {
    worst_i = std::max(worst_i, s.norm * std::abs(s.lambda) - 1.0);
    t.rows.push_back({th, 0, s.lambda.real(), s.lambda.imag(), s.norm, 1.0 / std::abs(s.lambda), double(s.converged)});
  }
  for (const auto& s : so) {
    worst_o = std::max(worst_o, s.norm * std::abs(s.lambda) / C);
    t.rows.push_back({th, 1, s.lambda.real(), s.lambda.imag(), s.norm, C / std::abs(s.lambda), double(s.converged)});
  }
  r.verdicts.push_back(leq(name(label, "resolvent |l| ||R|| - 1 on Sigma_th~ " + tag(th)), worst_i, tol.resolvent,
                           std::to_string(samples) + " samples"));
  r.verdicts.push_back(leq(name(label, "resolvent |l| ||R|| / C on Sigma_{pi/2+th~/2} " + tag(th)), worst_o, 1.0,
                           "C = " + fmt(C)));
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport contracts(const TorusGrid& grid, const AdmField& adm, double theta, const std::vector<Complex>& zetas,
                      unsigned seed, const Tolerances& tol, const std::string& label) {
  SuiteReport r;
  const auto forms = assemble_forms(grid, adm);
  const auto op = assemble_delta_theta(forms, theta);
  const auto adj = assemble_delta_theta(forms, kPi - theta);
  std::mt19937_64 rng(seed);
  const std::vector<CVector> psis = {random_vector(op.size(), rng), random_vector(op.size(), rng)};
  double law = 0, norm = 0, adjoint = 0, contour = 0, slope = INFINITY;
  Table t{"contracts", {"theta", "z1_re", "z1_im", "z2_re", "z2_im", "law", "max_norm", "adjoint", "contour",
                        "generator_slope"}, {}};
  for (std::size_t i = 1; i < zetas.size(); ++i) {
    const auto c = semigroup_contract_suite(op, adj, zetas[0], zetas[i], psis, 0);
    law = std::max(law, c.semigroup_law);
    norm = std::max(norm, c.max_norm);
    adjoint = std::max(adjoint, c.adjoint_law);
    contour = std::max(contour, c.contour_vs_dense);
    slope = std::min(slope, c.generator_slope);
    t.rows.push_back({theta, zetas[0].real(), zetas[0].imag(), zetas[i].real(), zetas[i].imag(), c.semigroup_law,
                      c.max_norm, c.adjoint_law, c.contour_vs_dense, c.generator_slope});
  }
  const std::string th = " " + tag(theta);
  r.verdicts.push_back(leq(name(label, "semigroup law" + th), law, tol.law));
  r.verdicts.push_back(leq(name(label, "contractivity ||T|| - 1" + th), norm - 1.0, tol.law));
  r.verdicts.push_back(leq(name(label, "weighted adjoint law" + th), adjoint, tol.law));
  r.verdicts.push_back(leq(name(label, "contour vs dense" + th), contour, tol.contour));
  r.verdicts.push_back(geq(name(label, "generator difference slope" + th), slope, 0.9));
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport eikonal(const AdmField& adm, const std::vector<double>& thetas, int points, unsigned seed,
                    const Tolerances& tol, const std::string& label) {
  SuiteReport r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int D = adm.dim();
  double e2 = 0, e3 = 0, e4 = 0;
  Table t{"eikonal_closed_forms", {"theta", "order2", "order3", "order4"}, {}};
  for (int s = 0; s < points; ++s) {
    std::vector<double> y(static_cast<std::size_t>(D));
    for (int mu = 0; mu < D; ++mu) y[mu] = u(rng) * adm.periods[mu];
    const double th = thetas[static_cast<std::size_t>(s) % thetas.size()];
    const auto c = eikonal_closed_form_deviation(adm, th, y);
    e2 = std::max(e2, c.order2), e3 = std::max(e3, c.order3), e4 = std::max(e4, c.order4);
    t.rows.push_back({th, c.order2, c.order3, c.order4});
  }
  r.verdicts.push_back(leq(name(label, "eikonal closed forms, orders 2-4"), std::max({e2, e3, e4}), tol.closed_form,
                           std::to_string(points) + " random points"));
  r.tables.push_back(std::move(t));
  // Residual slope at L = 10 over |dy| in [0.05, 0.4] per 2 pi of period, above the roundoff floor.
  const int L = 10;
  const double unit = adm.periods[0] / (2 * kPi);
  std::vector<double> y0(static_cast<std::size_t>(D), 0.0);
  y0[D - 1] = 0.4 * unit;
  std::vector<double> dir(static_cast<std::size_t>(D), 1.0);
  dir[0] = 0.75;
  double worst = INFINITY, floor = 0.0;
  int used = 1 << 20;
  bool exact = true;
  Table ts{"eikonal_residual", {"frame", "dy", "residual"}, {}};
  for (Frame f : {Frame::First, Frame::Second}) {
    const auto sj = solve_eikonal_jets(make_jet(adm, y0, L), thetas.front(), L, f);
    const auto rs = eikonal_residual_slope(sj, adm, dir, 0.05 * unit, 0.4 * unit, 12);
    for (std::size_t i = 0; i < rs.radius.size(); ++i)
      ts.rows.push_back({double(f == Frame::Second), rs.radius[i], rs.residual[i]});
    exact = exact && rs.exact();
    floor = std::max(floor, rs.largest);
    if (rs.exact()) continue;
    worst = std::min(worst, rs.used >= 4 ? rs.slope : -INFINITY);
    used = std::min(used, rs.used);
  }
  if (exact)  // e.g. flat: sigma is exactly quadratic
    r.verdicts.push_back(holds(name(label, "eikonal residual at roundoff, L = 10"), true, floor,
                               "no sample above 100 eps |sigma|"));
  else
    r.verdicts.push_back(geq(name(label, "eikonal residual slope, L = 10"), worst, L - 0.5,
                             std::to_string(used) + "+ samples above the roundoff floor"));
  r.tables.push_back(std::move(ts));
  return r;
}

SuiteReport transport(const AdmField& adm, const std::vector<double>& thetas, int order, const Tolerances& tol,
                      bool flat_oracle, const std::string& label) {
  SuiteReport r;
  const int D = adm.dim();
  std::vector<double> y(static_cast<std::size_t>(D), 0.0);
  Table t{"transport_diagonal", {"theta", "n", "re", "im"}, {}};
  Table p{"predicted_series", {"theta", "n", "re", "im"}, {}};
  double flat_dev = 0.0;
  const double V = adm.potential.constant();
  for (double th : thetas) {
    const auto m = build_transport(adm, th, order, y);
    double fact = 1.0;
    for (int n = 0; n <= order; ++n) {
      if (n > 0) fact *= n;
      const Complex a = m.solution.diagonal[n];
      t.rows.push_back({th, double(n), a.real(), a.imag()});
      flat_dev = std::max(flat_dev, std::abs(a - std::pow(-V, n) / fact));
    }
    const auto ser = predicted_diagonal_series(adm, th, order, y);
    for (std::size_t n = 0; n < ser.size(); ++n) p.rows.push_back({th, double(n), ser[n].real(), ser[n].imag()});
  }
  if (flat_oracle)
    r.verdicts.push_back(leq(name(label, "flat diagonal coefficients (-V)^n/n!"), flat_dev, tol.potential,
                             "n <= " + std::to_string(order)));
  bool euclid = false;
  for (double th : thetas) euclid = euclid || std::abs(th - kPi / 2) < 1e-12;
  if (adm.d == 1 && euclid) {
    double worst = 0.0;
    Table o{"a1_oracle", {"t", "x", "transport", "oracle"}, {}};
    for (double x : {0.0, 0.13, 0.4, 0.77}) {
      const std::vector<double> yy = {0.05 * adm.periods[0], x * adm.periods[1]};
      const auto m = build_transport(adm, kPi / 2, 1, yy);
      const double a1 = seeley_dewitt_a1(adm, yy);
      worst = std::max(worst, std::abs(m.solution.diagonal[1] - a1));
      o.rows.push_back({yy[0], yy[1], m.solution.diagonal[1].real(), a1});
    }
    r.verdicts.push_back(leq(name(label, "A_1 vs Seeley-DeWitt R/6 - V"), worst, tol.oracle, "4 points, th = pi/2"));
    r.tables.push_back(std::move(o));
  }
  r.tables.push_back(std::move(t));
  r.tables.push_back(std::move(p));
  return r;
}

SuiteReport kernel_laws(const TorusGrid& grid, const AdmField& adm, double theta, Complex z1, Complex z2,
                        unsigned seed, const Tolerances& tol, bool contour_route, const std::string& label) {
  SuiteReport r;
  const auto forms = assemble_forms(grid, adm);
  const auto op = assemble_delta_theta(forms, theta);
  const auto adj = assemble_delta_theta(forms, kPi - theta);
  const std::string th = " " + tag(theta);
  const auto k1 = build_kernel(op, z1);
  std::mt19937_64 rng(seed);
  const CVector psi = random_vector(op.size(), rng);
  const CVector direct = evolve_dense(op, z1, psi).state;
  r.verdicts.push_back(leq(name(label, "kernel reproduces T(z) psi" + th),
                           (apply_kernel(k1, psi) - direct).norm() / direct.norm(), tol.kernel));
  r.verdicts.push_back(leq(name(label, "kernel Hermiticity pairing" + th),
                           hermiticity_deviation(k1, build_kernel(adj, std::conj(z1))), tol.kernel));
  r.verdicts.push_back(leq(name(label, "Chapman-Kolmogorov" + th),
                           chapman_kolmogorov_deviation(k1, build_kernel(op, z2), build_kernel(op, z1 + z2)),
                           tol.chapman));
  if (contour_route) {
    const auto kc = build_kernel_contour(op, z1);
    r.verdicts.push_back(leq(name(label, "kernel contour vs dense" + th),
                             (kc.entries - k1.entries).cwiseAbs().maxCoeff() / k1.entries.cwiseAbs().maxCoeff(), 1e-8));
  }
  // Heat residual at a real zeta: halving dz should quarter it.
  const double z = std::max(z1.real(), z2.real());
  const auto h1 = heat_equation_residual(op, z, 0.02 * z);
  const auto h2 = heat_equation_residual(op, z, 0.01 * z);
  const double ratio = h1.residual / h2.residual;
  r.verdicts.push_back(holds(name(label, "heat residual ratio under dz halving" + th), std::abs(ratio - 4.0) < 0.4,
                             ratio, "expect 4 +- 0.4"));
  r.verdicts.push_back(leq(name(label, "heat residual within the differencing bound" + th),
                           h2.residual / h2.differencing_bound, 1.05));
  Table t{"heat_residual", {"theta", "zeta", "dz", "residual", "bound"}, {}};
  t.rows.push_back({theta, z, 0.02 * z, h1.residual, h1.differencing_bound});
  t.rows.push_back({theta, z, 0.01 * z, h2.residual, h2.differencing_bound});
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport diagonal_fit(const AdmField& adm, double period, const std::vector<int>& levels, double theta,
                         int points, const Tolerances& tol, const std::string& label) {
  SuiteReport r;
  const std::vector<double> y(static_cast<std::size_t>(adm.dim()), 0.0);
  const double h_coarse = period / levels[levels.size() - 2];
  const auto zs = default_fit_window(h_coarse, period, points);
  std::vector<DiagonalSeries> lv;
  Table ts{"kernel_diagonal", {"theta", "n", "zeta", "re", "im"}, {}};
  for (int n : levels) {
    std::vector<int> sizes(static_cast<std::size_t>(adm.dim()), n);
    lv.push_back(kernel_diagonal(assemble_delta_theta(TorusGrid(sizes, adm.periods), adm, theta), y, zs));
    for (std::size_t i = 0; i < zs.size(); ++i)
      ts.rows.push_back({theta, double(n), zs[i], lv.back().diag[i].real(), lv.back().diag[i].imag()});
  }
  const auto rich = richardson(lv);
  const std::string th = " " + tag(theta);
  if (levels.size() >= 3)
    r.verdicts.push_back(holds(name(label, "observed lattice order" + th), std::abs(rich.observed_order - 2.0) < 0.25,
                               rich.observed_order, "Richardson assumes 2"));
  const auto fit = fit_diagonal_asymptotics(rich, adm, theta, y, 2);
  r.verdicts.push_back(leq(name(label, "fitted A_0 vs 1" + th), std::abs(fit.fitted[0] - 1.0), tol.fit_a0));
  const bool a1_zero = std::abs(fit.predicted[1]) < 1e-8;
  r.verdicts.push_back(leq(name(label, std::string("fitted A_1 vs transport") + (a1_zero ? " (absolute)" : "") + th),
                           a1_zero ? std::abs(fit.fitted[1]) : fit.deviation[1], tol.fit_a1,
                           "fit " + fmt(fit.fitted[1].real()) + " predicted " + fmt(fit.predicted[1].real())));
  const auto rem = difference_to_parametrix(rich, adm, theta, 1, y);
  r.verdicts.push_back(holds(name(label, "remainder exponent at N0 = 1" + th),
                             rem.super_polynomial || rem.exponent >= 1.5, rem.exponent,
                             rem.super_polynomial ? "at the lattice floor" : "need >= 1.5"));
  Table tf{"diagonal_fit", {"theta", "n", "fit_re", "fit_im", "pred_re", "pred_im", "deviation"}, {}};
  for (std::size_t n = 0; n < fit.fitted.size(); ++n)
    tf.rows.push_back({theta, double(n), fit.fitted[n].real(), fit.fitted[n].imag(), fit.predicted[n].real(),
                       fit.predicted[n].imag(), fit.deviation[n]});
  Table trm{"remainder", {"theta", "zeta", "remainder", "lattice_error"}, {}};
  for (std::size_t i = 0; i < rem.zeta.size(); ++i) trm.rows.push_back({theta, rem.zeta[i], rem.remainder[i], rich.error_estimate[i]});
  r.tables.push_back(std::move(ts));
  r.tables.push_back(std::move(tf));
  r.tables.push_back(std::move(trm));
  return r;
}

SuiteReport smoothing(const TorusGrid& grid, const AdmField& adm, double theta, unsigned seed, const std::string& label) {
  SuiteReport r;
  const auto op = assemble_delta_theta(grid, adm, theta);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  CVector noise(op.size());
  for (auto& x : noise) x = nd(rng);
  double h = 0.0;
  for (int mu = 0; mu < grid.dim(); ++mu) h = std::max(h, grid.spacing(mu));
  const double lo = 4 * h * h, hi = 0.1 * grid.periods[0] * grid.periods[0];
  std::vector<double> zs;
  for (int j = 0; j < 10; ++j) zs.push_back(lo * std::pow(hi / lo, j / 9.0));
  const auto fits = smoothing_rate_probe(op, noise, zs, 2);
  Table t{"smoothing", {"m", "zeta", "norm"}, {}};
  for (const auto& f : fits) {
    r.verdicts.push_back(leq(name(label, "smoothing exponent m = " + std::to_string(f.m) + " " + tag(theta)),
                             f.exponent, f.sigma_m + 0.5, "sigma_m = " + std::to_string(f.sigma_m)));
    for (std::size_t i = 0; i < f.zeta.size(); ++i) t.rows.push_back({double(f.m), f.zeta[i], f.norm[i]});
  }
  bool mono = true;
  for (std::size_t m = 1; m < fits.size(); ++m) mono = mono && fits[m].exponent > fits[m - 1].exponent;
  r.verdicts.push_back(holds(name(label, "smoothing exponents grow with m"), mono, fits.back().exponent));
  r.tables.push_back(std::move(t));
  return r;
}

SuiteReport lorentz(const TorusGrid& grid, const AdmField& adm, const std::vector<double>& s_list,
                    const std::vector<double>& thetas, int probes, int rank, unsigned seed, const Tolerances& tol,
                    std::optional<double> flat_potential, const std::string& label) {
  SuiteReport r;
  const auto forms = assemble_forms(grid, adm);
  const auto lor = assemble_delta_theta(forms, std::nullopt);
  const SchrodingerGroup grp(lor);
  std::mt19937_64 rng(seed);
  const CVector x = random_vector(lor.size(), rng);
  double unit = 0.0;
  for (double s : s_list)
    unit = std::max(unit, std::abs(weighted_norm(lor.weights, grp.apply(s, x)) / weighted_norm(lor.weights, x) - 1.0));
  r.verdicts.push_back(leq(name(label, "Schrodinger group unitarity"), unit, tol.unitary));
  Table t{"trace_gap", {"probe", "theta", "s", "rank", "gap", "gap_adjoint"}, {}};
  bool all_trend = true;
  double worst_ratio = 0.0;
  for (int p = 0; p < probes; ++p)
    for (double s : s_list) {
      const auto probe = smooth_probe(grid, rank, seed + 100 + p, s, thetas);
      const auto rows = trace_gap_scan(grid, adm, probe);
      std::vector<double> g, ga;
      for (const auto& row : rows) {
        g.push_back(row.gap), ga.push_back(row.gap_adjoint);
        t.rows.push_back({double(p), row.theta, s, double(rank), row.gap, row.gap_adjoint});
      }
      all_trend = all_trend && decreasing_trend(g, tol.trend_factor) && decreasing_trend(ga, tol.trend_factor);
      worst_ratio = std::max({worst_ratio, g.back() / g.front(), ga.back() / ga.front()});
      if (flat_potential) {
        const Complex ref = flat_trace_closed_form(grid, *flat_potential, probe, std::nullopt, -1);
        const Complex refa = flat_trace_closed_form(grid, *flat_potential, probe, std::nullopt, +1);
        double dev = 0.0;
        for (const auto& row : rows)
          dev = std::max({dev, std::abs(row.gap - std::abs(flat_trace_closed_form(grid, *flat_potential, probe, row.theta) - ref)),
                          std::abs(row.gap_adjoint -
                                   std::abs(flat_trace_closed_form(grid, *flat_potential, probe, kPi - row.theta) - refa))});
        r.verdicts.push_back(leq(name(label, "flat closed-form gap, probe " + std::to_string(p) + " s = " + fmt(s)), dev,
                                 tol.closed_gap));
      }
    }
  r.verdicts.push_back(holds(name(label, "gap decreases along the theta list, both branches"), all_trend, worst_ratio,
                             "worst gap(last)/gap(first); need < 1/" + fmt(tol.trend_factor)));
  // At the Euclidean angle the probe must see a difference.
  const auto probe = smooth_probe(grid, rank, seed + 100, s_list.back(), {kPi / 2});
  const double g = trace_gap_scan(grid, adm, probe).front().gap;
  r.verdicts.push_back(geq(name(label, "Euclidean-angle gap is nonzero"), g, 1e-6));
  r.tables.push_back(std::move(t));
  return r;
}

}  // namespace wick::checks
