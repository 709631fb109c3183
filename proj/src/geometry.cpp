#include "wick/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wick {

AdmField AdmField::flat(int d, std::vector<double> periods, double v) {
  if (d < 1) throw InvalidGeometry("spatial dimension must be at least 1");
  if (static_cast<int>(periods.size()) != d + 1) throw InvalidGeometry("need one period per coordinate");
  AdmField a;
  a.d = d;
  a.periods = std::move(periods);
  a.lapse = FourierSeries(d + 1, 1.0);
  a.shift.assign(static_cast<std::size_t>(d), FourierSeries(d + 1, 0.0));
  a.ghat.assign(static_cast<std::size_t>(d * d), FourierSeries(d + 1, 0.0));
  for (int i = 0; i < d; ++i) a.spatial(i, i).set_constant(1.0);
  a.potential = FourierSeries(d + 1, v);
  return a;
}

std::vector<int> AdmField::max_wavenumbers() const {
  std::vector<int> out(static_cast<std::size_t>(dim()), 0);
  auto merge = [&](const FourierSeries& f) {
    auto k = f.max_wavenumbers();
    for (int mu = 0; mu < dim(); ++mu) out[mu] = std::max(out[mu], k[mu]);
  };
  merge(lapse);
  for (const auto& s : shift) merge(s);
  for (const auto& g : ghat) merge(g);
  merge(potential);
  return out;
}

AdmSample sample_adm(const AdmField& adm, std::span<const double> y) {
  AdmSample s;
  s.lapse = adm.lapse.value(y, adm.periods);
  s.shift.resize(adm.d);
  s.ghat.resize(adm.d, adm.d);
  for (int a = 0; a < adm.d; ++a) {
    s.shift(a) = adm.shift[a].value(y, adm.periods);
    for (int b = 0; b < adm.d; ++b) s.ghat(a, b) = adm.spatial(a, b).value(y, adm.periods);
  }
  s.potential = adm.potential.value(y, adm.periods);
  return s;
}

void AdmField::validate(double margin) const {
  if (d < 1) throw InvalidGeometry("spatial dimension must be at least 1");
  const int D = dim();
  if (static_cast<int>(periods.size()) != D) throw InvalidGeometry("need one period per coordinate");
  for (double p : periods)
    if (!(p > 0.0)) throw InvalidGeometry("periods must be positive");
  if (static_cast<int>(shift.size()) != d || static_cast<int>(ghat.size()) != d * d)
    throw InvalidGeometry("shift or spatial metric has wrong component count");
  auto kmax = max_wavenumbers();
  std::vector<int> n(static_cast<std::size_t>(D));
  long total = 1;
  for (int mu = 0; mu < D; ++mu) {
    n[mu] = std::max(8, 4 * (2 * kmax[mu] + 1));
    total *= n[mu];
  }
  if (total > 20'000'000) throw SizeLimitExceeded("positivity probe grid too large");
  std::vector<double> y(static_cast<std::size_t>(D));
  for (long idx = 0; idx < total; ++idx) {
    long r = idx;
    for (int mu = 0; mu < D; ++mu) {
      y[mu] = periods[mu] * static_cast<double>(r % n[mu]) / n[mu];
      r /= n[mu];
    }
    const AdmSample s = sample_adm(*this, y);
    if (!(s.lapse > margin)) throw InvalidGeometry("lapse not positive at a probe point");
    if ((s.ghat - s.ghat.transpose()).cwiseAbs().maxCoeff() > 1e-14)
      throw InvalidGeometry("spatial metric is not symmetric");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(s.ghat, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > margin)) throw InvalidGeometry("spatial metric not positive definite at a probe point");
    if (s.potential < -1e-14) throw InvalidGeometry("potential is negative at a probe point");
  }
}

namespace {

void check_point(const AdmSample& s) {
  if (!(s.lapse > 0.0)) throw InvalidGeometry("non-positive lapse");
  Eigen::SelfAdjointEigenSolver<RMatrix> es(s.ghat, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) throw InvalidGeometry("spatial metric not positive definite");
}

CMatrix lower_metric(const AdmSample& s, Complex lapse_phase) {
  const int d = static_cast<int>(s.shift.size());
  CMatrix g(d + 1, d + 1);
  const RVector low_shift = s.ghat * s.shift;
  g(0, 0) = -lapse_phase * s.lapse * s.lapse + s.shift.dot(low_shift);
  for (int a = 0; a < d; ++a) {
    g(0, a + 1) = g(a + 1, 0) = low_shift(a);
    for (int b = 0; b < d; ++b) g(a + 1, b + 1) = s.ghat(a, b);
  }
  return g;
}

TaylorPoly poly_det(const PolyMatrix& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  TaylorPoly det(m[0][0].basis_ptr());
  for (std::size_t c = 0; c < n; ++c) {
    PolyMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<TaylorPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(std::move(row));
    }
    TaylorPoly term = m[0][c] * poly_det(minor);
    if (c % 2) det -= term;
    else det += term;
  }
  return det;
}

}  // namespace

ThetaMetric build_theta_metric(const AdmField& adm, double theta, std::span<const double> y) {
  if (!(theta > 0.0 && theta <= kPi)) throw ContractViolation("theta must lie in (0, pi]");
  const AdmSample s = sample_adm(adm, y);
  check_point(s);
  const Complex phase = std::exp(Complex(0.0, -2.0 * theta));
  ThetaMetric m;
  m.theta = theta;
  m.components = lower_metric(s, phase);
  const int d = adm.d;
  const RMatrix ghat_inv = s.ghat.inverse();
  const Complex q = 1.0 / (phase * s.lapse * s.lapse);
  m.inverse.resize(d + 1, d + 1);
  m.inverse(0, 0) = -q;
  for (int a = 0; a < d; ++a) {
    m.inverse(0, a + 1) = m.inverse(a + 1, 0) = q * s.shift(a);
    for (int b = 0; b < d; ++b) m.inverse(a + 1, b + 1) = ghat_inv(a, b) - q * s.shift(a) * s.shift(b);
  }
  m.density = s.lapse * std::sqrt(s.ghat.determinant());
  return m;
}

JetPoint make_jet(const AdmField& adm, std::span<const double> y, int order) {
  JetPoint j;
  j.base.assign(y.begin(), y.end());
  j.order = order;
  j.d = adm.d;
  j.lapse = adm.lapse.jet(y, adm.periods, order);
  for (const auto& s : adm.shift) j.shift.push_back(s.jet(y, adm.periods, order));
  for (const auto& g : adm.ghat) j.ghat.push_back(g.jet(y, adm.periods, order));
  j.potential = adm.potential.jet(y, adm.periods, order);
  return j;
}

MetricJets adm_metric_jets(const JetPoint& jet, Complex lapse_phase, bool closed_form_inverse) {
  const int d = jet.d;
  const int D = d + 1;
  const auto basis = jet.lapse.basis_ptr();
  MetricJets m;
  m.order = jet.order;
  m.potential = jet.potential;
  PolyMatrix ghat(static_cast<std::size_t>(d), std::vector<TaylorPoly>(static_cast<std::size_t>(d)));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) ghat[a][b] = jet.ghat[static_cast<std::size_t>(a * d + b)];
  const TaylorPoly n2 = jet.lapse * jet.lapse;

  std::vector<TaylorPoly> low_shift(static_cast<std::size_t>(d), TaylorPoly(basis));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) low_shift[a] += ghat[a][b] * jet.shift[b];
  m.g.assign(static_cast<std::size_t>(D), std::vector<TaylorPoly>(static_cast<std::size_t>(D), TaylorPoly(basis)));
  m.g[0][0] = n2 * (-lapse_phase);
  for (int a = 0; a < d; ++a) {
    m.g[0][0] += low_shift[a] * jet.shift[a];
    m.g[0][a + 1] = m.g[a + 1][0] = low_shift[a];
    for (int b = 0; b < d; ++b) m.g[a + 1][b + 1] = ghat[a][b];
  }

  if (closed_form_inverse) {
    const PolyMatrix ghat_inv = poly_inverse(ghat);
    const TaylorPoly q = n2.reciprocal() * (1.0 / lapse_phase);
    m.ginv.assign(static_cast<std::size_t>(D), std::vector<TaylorPoly>(static_cast<std::size_t>(D), TaylorPoly(basis)));
    m.ginv[0][0] = -q;
    for (int a = 0; a < d; ++a) {
      const TaylorPoly qa = q * jet.shift[a];
      m.ginv[0][a + 1] = m.ginv[a + 1][0] = qa;
      for (int b = 0; b < d; ++b) m.ginv[a + 1][b + 1] = ghat_inv[a][b] - qa * jet.shift[b];
    }
  } else {
    m.ginv = poly_inverse(m.g);
  }
  m.density = jet.lapse * poly_det(ghat).sqrt();
  return m;
}

MetricJets theta_metric_jets(const JetPoint& jet, double theta) {
  if (!(theta > 0.0 && theta <= kPi)) throw ContractViolation("theta must lie in (0, pi]");
  return adm_metric_jets(jet, std::exp(Complex(0.0, -2.0 * theta)));
}

std::vector<TaylorPoly> gamma_vector(const MetricJets& m) {
  if (m.order < 1) throw ContractViolation("gamma needs jets of order at least 1");
  const int D = static_cast<int>(m.g.size());
  const TaylorPoly rinv = m.density.reciprocal();
  std::vector<TaylorPoly> gamma;
  for (int mu = 0; mu < D; ++mu) {
    TaylorPoly div(m.density.basis_ptr());
    for (int nu = 0; nu < D; ++nu) div += (m.density * m.ginv[nu][mu]).derivative(nu);
    gamma.push_back(rinv * div);
  }
  return gamma;
}

CVector gamma_vector(const AdmField& adm, double theta, const JetPoint& jet) {
  (void)adm;
  const auto g = gamma_vector(theta_metric_jets(jet, theta));
  CVector out(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) out(static_cast<Eigen::Index>(i)) = g[i].constant_term();
  return out;
}

TaylorPoly laplace_beltrami(const MetricJets& m, const TaylorPoly& u) {
  const int D = static_cast<int>(m.g.size());
  std::vector<TaylorPoly> du;
  for (int nu = 0; nu < D; ++nu) du.push_back(u.derivative(nu));
  TaylorPoly div(u.basis_ptr());
  for (int mu = 0; mu < D; ++mu) {
    TaylorPoly flux(u.basis_ptr());
    for (int nu = 0; nu < D; ++nu) flux += m.ginv[mu][nu] * du[nu];
    div += (m.density * flux).derivative(mu);
  }
  return m.density.reciprocal() * div;
}

double combination_identity_check(const AdmField& adm, double theta, std::span<const double> y) {
  const AdmSample s = sample_adm(adm, y);
  check_point(s);
  // Independent route: numerically invert each lower metric.
  const CMatrix gt = lower_metric(s, std::exp(Complex(0.0, -2.0 * theta))).inverse();
  const CMatrix gp = lower_metric(s, -1.0).inverse();
  const CMatrix gm = lower_metric(s, 1.0).inverse();
  const CMatrix diff = kI * std::exp(Complex(0.0, -theta)) * gt - (std::sin(theta) * gp + kI * std::cos(theta) * gm);
  return diff.cwiseAbs().maxCoeff();
}

namespace {

void check_u(const TaylorPoly& u, const AdmField& adm) {
  if (u.max_degree() < 2) throw ContractViolation("test field jet must have order at least 2");
  if (u.nvars() != adm.dim()) throw ContractViolation("test field jet has wrong variable count");
}

}  // namespace

Complex apply_delta_theta(const AdmField& adm, double theta, const TaylorPoly& u_jet, std::span<const double> y) {
  check_u(u_jet, adm);
  const JetPoint jet = make_jet(adm, y, u_jet.max_degree());
  check_point(sample_adm(adm, y));
  const MetricJets plus = adm_metric_jets(jet, -1.0, false);
  const MetricJets minus = adm_metric_jets(jet, 1.0, false);
  const Complex v = jet.potential.constant_term();
  const Complex u0 = u_jet.constant_term();
  const Complex d_plus = -laplace_beltrami(plus, u_jet).constant_term() + v * u0;
  const Complex d_minus = -laplace_beltrami(minus, u_jet).constant_term() + v * u0;
  return -std::sin(theta) * d_plus - kI * std::cos(theta) * d_minus;
}

Complex apply_delta_theta_metric(const AdmField& adm, double theta, const TaylorPoly& u_jet,
                                 std::span<const double> y) {
  check_u(u_jet, adm);
  const JetPoint jet = make_jet(adm, y, u_jet.max_degree());
  check_point(sample_adm(adm, y));
  const MetricJets m = theta_metric_jets(jet, theta);
  const auto gamma = gamma_vector(m);
  const int D = adm.dim();
  Complex acc = 0.0;
  for (int mu = 0; mu < D; ++mu) {
    const TaylorPoly du = u_jet.derivative(mu);
    acc += gamma[mu].constant_term() * du.constant_term();
    for (int nu = 0; nu < D; ++nu) acc += m.ginv[mu][nu].constant_term() * du.derivative(nu).constant_term();
  }
  acc -= jet.potential.constant_term() * u_jet.constant_term();
  return kI * std::exp(Complex(0.0, -theta)) * acc;
}

}  // namespace wick
