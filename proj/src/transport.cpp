#include "wick/transport.hpp"

#include <cmath>

namespace wick {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

Complex LOperatorExpansion::d(std::span<const int> indices) const {
  const int l = static_cast<int>(indices.size());
  if (l > degree) return 0.0;
  const Exponent e = exponent_from_indices(indices, d_poly.nvars());
  return d_poly.coeff(e) * exponent_factorial(e, d_poly.nvars()) / factorial(l);
}

Complex LOperatorExpansion::e(int nu, std::span<const int> indices) const {
  const int l = static_cast<int>(indices.size());
  if (l > degree) return 0.0;
  const auto& p = e_poly[static_cast<std::size_t>(nu)];
  const Exponent ex = exponent_from_indices(indices, p.nvars());
  return p.coeff(ex) * exponent_factorial(ex, p.nvars()) / factorial(l);
}

TaylorPoly LOperatorExpansion::apply(const TaylorPoly& a) const {
  TaylorPoly out = d_poly * a;
  for (std::size_t nu = 0; nu < e_poly.size(); ++nu) out += e_poly[nu] * a.derivative(static_cast<int>(nu));
  return out;
}

LOperatorExpansion expand_transport_operator(const MetricJets& metric, const SymJet& sigma, double theta,
                                             int degree) {
  if (sigma.frame != Frame::Second) throw ContractViolation("transport expects a second-frame Synge jet");
  if (sigma.max_order < degree + 2) throw ContractViolation("insufficient Synge jet order for the transport operator");
  if (metric.order < degree + 1) throw ContractViolation("insufficient metric jet order for the transport operator");
  const int D = sigma.dim();
  const Complex w0 = kI * std::exp(Complex(0.0, -theta));
  const auto gamma = gamma_vector(metric);
  const TaylorPoly s = sigma.sigma.with_max_degree(degree + 2);
  std::vector<TaylorPoly> ds;
  for (int mu = 0; mu < D; ++mu) ds.push_back(s.derivative(mu).with_max_degree(degree));

  LOperatorExpansion lop;
  lop.degree = degree;
  lop.d_poly = TaylorPoly(D, degree);
  for (int nu = 0; nu < D; ++nu) lop.e_poly.emplace_back(D, degree);
  for (int mu = 0; mu < D; ++mu) {
    const TaylorPoly gam = gamma[mu].with_max_degree(degree);
    lop.d_poly += gam * ds[mu];
    for (int nu = 0; nu < D; ++nu) {
      const TaylorPoly gi = metric.ginv[mu][nu].with_max_degree(degree);
      lop.d_poly += gi * s.derivative(mu).derivative(nu).with_max_degree(degree);
      lop.e_poly[nu] += gi * ds[mu] * Complex(2.0);
    }
  }
  lop.d_poly *= w0;
  for (auto& e : lop.e_poly) e *= w0;
  return lop;
}

Complex TransportSolution::coefficient(int n, std::span<const int> indices) const {
  const auto& p = a[static_cast<std::size_t>(n)];
  if (static_cast<int>(indices.size()) > p.max_degree()) return 0.0;
  const Exponent e = exponent_from_indices(indices, p.nvars());
  return p.coeff(e) * exponent_factorial(e, p.nvars());
}

TransportSolution solve_transport(const LOperatorExpansion& lop, const MetricJets& metric, double theta, int N) {
  const TransportOrders ord{N};
  const int T = ord.c0() - 1;
  if (N < 0) throw ContractViolation("transport order must be non-negative");
  if (lop.degree < T) throw ContractViolation("operator expansion truncated below c0 - 1");
  const int D = lop.d_poly.nvars();
  const int d = D - 1;
  const Complex w0 = kI * std::exp(Complex(0.0, -theta));
  const auto gamma = gamma_vector(metric);

  // Restrict all coefficient data to degree T.
  LOperatorExpansion L = lop;
  L.degree = T;
  L.d_poly = lop.d_poly.with_max_degree(T);
  for (auto& e : L.e_poly) e = e.with_max_degree(T);
  PolyMatrix gi(static_cast<std::size_t>(D), std::vector<TaylorPoly>(static_cast<std::size_t>(D)));
  std::vector<TaylorPoly> gam;
  for (int mu = 0; mu < D; ++mu) {
    gam.push_back(gamma[mu].with_max_degree(T));
    for (int nu = 0; nu < D; ++nu) gi[mu][nu] = metric.ginv[mu][nu].with_max_degree(T);
  }
  const TaylorPoly V = metric.potential.with_max_degree(T);

  auto Y = [&](int n, const TaylorPoly& a) {
    TaylorPoly y = a * Complex(2.0 * n - (d + 1)) + L.apply(a);
    return y * (0.5 * w0);
  };
  auto Z = [&](const TaylorPoly& a) {
    TaylorPoly z = V * a * Complex(-1.0);
    for (int mu = 0; mu < D; ++mu) {
      const TaylorPoly da = a.derivative(mu);
      z += gam[mu] * da;
      for (int nu = 0; nu < D; ++nu) z += gi[mu][nu] * da.derivative(nu);
    }
    return z * (-w0);
  };

  TransportSolution sol;
  sol.N = N;
  sol.theta = theta;
  for (int n = 0; n <= N; ++n) {
    TaylorPoly a(D, T);
    TaylorPoly rhs(D, T);
    if (n == 0) a[0] = 1.0;
    else rhs = Z(sol.a.back());
    for (int p = (n == 0 ? 1 : 0); p <= ord.c(n) - 1; ++p) {
      const Complex pivot = 0.5 * w0 * static_cast<double>(2 * n + 2 * p);
      if (pivot == Complex(0.0)) throw InternalConsistency("zero pivot in the transport recursion");
      const TaylorPoly known = (Y(n, a) + rhs).homogeneous_part(p);
      a += known * (-1.0 / pivot);
    }
    sol.diagonal.push_back(a.constant_term());
    sol.a.push_back(std::move(a));
  }
  return sol;
}

TransportModel build_transport(const AdmField& adm, double theta, int N, std::span<const double> base) {
  TransportModel m;
  m.orders = TransportOrders{N};
  m.theta = theta;
  const int L = m.orders.L();
  m.jets = make_jet(adm, base, L - 1);
  m.metric = theta_metric_jets(m.jets, theta);
  m.sigma = solve_eikonal_jets(m.jets, theta, L, Frame::Second);
  m.lop = expand_transport_operator(m.metric, m.sigma, theta, m.orders.c0() - 1);
  m.solution = solve_transport(m.lop, m.metric, theta, N);
  m.solution.base.assign(base.begin(), base.end());
  return m;
}

XYZResidual residual_probe_XYZ(const TransportModel& model, const AdmField& adm, std::span<const double> dy) {
  const int D = adm.dim();
  const int d = adm.d;
  const double theta = model.theta;
  const Complex w0 = kI * std::exp(Complex(0.0, -theta));
  std::vector<double> y(model.jets.base);
  for (int mu = 0; mu < D; ++mu) y[mu] += dy[mu];

  const JetPoint jy = make_jet(adm, y, 1);
  const MetricJets my = theta_metric_jets(jy, theta);
  const auto gpoly = gamma_vector(my);
  CMatrix gi(D, D);
  CVector gam(D);
  for (int mu = 0; mu < D; ++mu) {
    gam(mu) = gpoly[mu].constant_term();
    for (int nu = 0; nu < D; ++nu) gi(mu, nu) = my.ginv[mu][nu].constant_term();
  }
  const Complex V = jy.potential.constant_term();

  // Value, gradient and Hessian of a polynomial at dy.
  struct Eval {
    Complex v;
    CVector g;
    CMatrix h;
  };
  auto eval = [&](const TaylorPoly& p) {
    Eval e{p.evaluate(dy), CVector(D), CMatrix(D, D)};
    for (int mu = 0; mu < D; ++mu) {
      const TaylorPoly dp = p.derivative(mu);
      e.g(mu) = dp.evaluate(dy);
      for (int nu = 0; nu < D; ++nu) e.h(mu, nu) = dp.derivative(nu).evaluate(dy);
    }
    return e;
  };
  const Eval s = eval(model.sigma.sigma);
  const Complex E = s.v - 0.5 * w0 * (s.g.transpose() * gi * s.g).value();
  const Complex lap_s = (gi.cwiseProduct(s.h)).sum() + (gam.transpose() * s.g).value();

  XYZResidual r;
  std::vector<Complex> Y, Z;
  for (int n = 0; n <= model.orders.N; ++n) {
    const Eval a = eval(model.solution.a[static_cast<std::size_t>(n)]);
    r.x.push_back(0.5 * w0 * w0 * E * a.v);
    const Complex Ls = w0 * lap_s * a.v + 2.0 * w0 * (s.g.transpose() * gi * a.g).value();
    Y.push_back(0.5 * w0 * ((2.0 * n - (d + 1)) * a.v + Ls));
    Z.push_back(-w0 * ((gi.cwiseProduct(a.h)).sum() + (gam.transpose() * a.g).value() - V * a.v));
  }
  r.y0 = Y[0];
  for (int n = 0; n < model.orders.N; ++n) r.yz.push_back(Y[n + 1] + Z[n]);
  r.z = Z;
  return r;
}

}  // namespace wick
