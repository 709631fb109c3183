#include "wick/parametrix.hpp"

#include <cmath>

namespace wick {

namespace {

void check_sector(double theta, Complex zeta) {
  if (zeta == Complex(0.0)) throw ContractViolation("zeta must be nonzero");
  if (!(std::abs(std::arg(zeta)) < theta_tilde(theta)))
    throw ContractViolation("zeta outside the sector |Arg zeta| < theta~");
}

struct Local {
  Complex v;
  CVector g;
  CMatrix h;
};

Local eval_local(const TaylorPoly& p, const std::vector<TaylorPoly>& dp, const std::vector<std::vector<TaylorPoly>>& ddp,
                 std::span<const double> dy) {
  const int D = static_cast<int>(dp.size());
  Local l{p.evaluate(dy), CVector(D), CMatrix(D, D)};
  for (int mu = 0; mu < D; ++mu) {
    l.g(mu) = dp[mu].evaluate(dy);
    for (int nu = 0; nu < D; ++nu) l.h(mu, nu) = ddp[mu][nu].evaluate(dy);
  }
  return l;
}

std::vector<double> displacement(const ParametrixModel& m, std::span<const double> y) {
  std::vector<double> dy(m.base().size());
  for (std::size_t i = 0; i < dy.size(); ++i) dy[i] = y[i] - m.base()[i];
  return dy;
}

}  // namespace

double smooth_cutoff(double r, double radius) {
  const double t = std::abs(r) / radius;
  if (t >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

Complex parametrix_prefactor(double theta, int d, Complex zeta) {
  const Complex phase = -kI * std::exp(Complex(0.0, theta));
  return std::pow(phase, 0.5 * (d - 1)) / std::pow(4.0 * kPi * zeta, 0.5 * (d + 1));
}

ParametrixModel build_parametrix(const AdmField& adm, double theta, int N, std::span<const double> yprime) {
  ParametrixModel m;
  m.transport = build_transport(adm, theta, N, yprime);
  m.d = adm.d;
  const int D = adm.dim();
  auto derivs = [D](const TaylorPoly& p, std::vector<TaylorPoly>& d1, std::vector<std::vector<TaylorPoly>>& d2) {
    d1.clear();
    d2.assign(static_cast<std::size_t>(D), {});
    for (int mu = 0; mu < D; ++mu) {
      d1.push_back(p.derivative(mu));
      for (int nu = 0; nu < D; ++nu) d2[mu].push_back(d1.back().derivative(nu));
    }
  };
  derivs(m.transport.sigma.sigma, m.ds, m.dds);
  m.da.resize(static_cast<std::size_t>(N + 1));
  m.dda.resize(static_cast<std::size_t>(N + 1));
  for (int n = 0; n <= N; ++n) derivs(m.transport.solution.a[n], m.da[n], m.dda[n]);
  return m;
}

ParametrixEval eval_parametrix(const ParametrixModel& m, Complex zeta, std::span<const double> y) {
  const double th = m.theta();
  check_sector(th, zeta);
  const auto dy = displacement(m, y);
  ParametrixEval e;
  e.theta = th;
  e.N = m.N();
  e.zeta = zeta;
  e.prefactor = parametrix_prefactor(th, m.d, zeta);
  e.s = m.transport.sigma.sigma.evaluate(dy);
  if (e.s.real() < 0.0) throw OutsideCone("Re s < 0 at the requested separation");
  const Complex q = kI * std::exp(Complex(0.0, -th));
  const Complex w = q * zeta;
  Complex S = 0.0, dS = 0.0, wn = 1.0;
  for (int n = 0; n <= e.N; ++n) {
    const Complex a = m.transport.solution.a[n].evaluate(dy);
    if (n > 0) dS += static_cast<double>(n) * a * (wn / w) * q;
    S += a * wn;
    wn *= w;
  }
  const Complex E = std::exp(-e.s / (2.0 * zeta));
  e.value = e.prefactor * E * S;
  e.dzeta = e.prefactor * E * ((-0.5 * (m.d + 1) / zeta + e.s / (2.0 * zeta * zeta)) * S + dS);
  return e;
}

ParametrixEval eval_parametrix(const AdmField& adm, double theta, int N, Complex zeta, std::span<const double> y,
                               std::span<const double> yprime) {
  return eval_parametrix(build_parametrix(adm, theta, N, yprime), zeta, y);
}

Complex heat_residual(const ParametrixModel& m, const AdmField& adm, Complex zeta, std::span<const double> y) {
  const ParametrixEval f = eval_parametrix(m, zeta, y);
  const int D = adm.dim();
  const double th = m.theta();
  const auto dy = displacement(m, y);
  const Complex q = kI * std::exp(Complex(0.0, -th));
  const Complex w = q * zeta;

  // S = sum A_n w^n and its y-derivatives.
  Local S{0.0, CVector::Zero(D), CMatrix::Zero(D, D)};
  Complex wn = 1.0;
  for (int n = 0; n <= m.N(); ++n) {
    const Local a = eval_local(m.transport.solution.a[n], m.da[n], m.dda[n], dy);
    S.v += a.v * wn;
    S.g += a.g * wn;
    S.h += a.h * wn;
    wn *= w;
  }
  const Local s = eval_local(m.transport.sigma.sigma, m.ds, m.dds, dy);
  // F = P e^{-s/2z} S; derivatives divided by P e^{-s/2z}.
  const Complex k = -0.5 / zeta;
  const CVector Fg = k * s.g * S.v + S.g;
  const CMatrix Fh = (k * k * (s.g * s.g.transpose()) + k * s.h) * S.v + k * (s.g * S.g.transpose() + S.g * s.g.transpose()) + S.h;

  const ThetaMetric tm = build_theta_metric(adm, th, y);
  const CVector gam = gamma_vector(adm, th, make_jet(adm, y, 1));
  const Complex V = sample_adm(adm, y).potential;
  const Complex lap = tm.inverse.cwiseProduct(Fh).sum() + (gam.transpose() * Fg).value() - V * S.v;
  const Complex scale = f.prefactor * std::exp(-f.s / (2.0 * zeta));
  return f.dzeta - scale * q * lap;
}

Complex heat_residual(const AdmField& adm, double theta, int N, Complex zeta, std::span<const double> y,
                      std::span<const double> yprime) {
  return heat_residual(build_parametrix(adm, theta, N, yprime), adm, zeta, y);
}

Complex heat_residual_xyz(const ParametrixModel& m, const AdmField& adm, Complex zeta, std::span<const double> y) {
  const ParametrixEval f = eval_parametrix(m, zeta, y);
  const auto dy = displacement(m, y);
  const XYZResidual r = residual_probe_XYZ(m.transport, adm, dy);
  const Complex w = kI * std::exp(Complex(0.0, -m.theta())) * zeta;
  Complex sum = r.y0 / w, wn = 1.0;
  for (int n = 0; n <= m.N(); ++n) {
    sum += wn * r.x[n] / (w * w);
    sum += wn * (n < m.N() ? r.yz[n] : r.z[n]);
    wn *= w;
  }
  return f.prefactor * std::exp(-f.s / (2.0 * zeta)) * sum;
}

std::vector<Complex> predicted_diagonal_series(const AdmField& adm, double theta, int N, std::span<const double> y) {
  const TransportModel t = build_transport(adm, theta, N, y);
  const Complex phase = std::pow(-kI * std::exp(Complex(0.0, theta)), 0.5 * (adm.d - 1));
  const Complex q = kI * std::exp(Complex(0.0, -theta));
  std::vector<Complex> c;
  Complex qn = 1.0;
  for (int n = 0; n <= N; ++n) {
    c.push_back(phase * t.solution.diagonal[n] * qn);
    qn *= q;
  }
  return c;
}

}  // namespace wick
