#include "wick/eikonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

namespace wick {

namespace {

// Degree in the first `nfirst` variables only.
int partial_degree(const Exponent& e, int nfirst) {
  int d = 0;
  for (int v = 0; v < nfirst; ++v) d += e[static_cast<std::size_t>(v)];
  return d;
}

TaylorPoly partial_degree_part(const TaylorPoly& p, int nfirst, int degree) {
  TaylorPoly out(p.basis_ptr());
  const auto& B = p.basis();
  for (std::size_t i = 0; i < B.size(); ++i)
    if (partial_degree(B.exponent(i), nfirst) == degree) out[i] = p[i];
  return out;
}

PolyMatrix truncate(const PolyMatrix& m, int degree) {
  PolyMatrix out = m;
  for (auto& row : out)
    for (auto& e : row) e = e.with_max_degree(degree);
  return out;
}

// One step of the algebraic recursion: sigma_n = -H [g^{-1} d sigma d sigma]_n / (n-1)
// with derivatives in the first D variables and the order counted in them.
void eikonal_recursion(TaylorPoly& sigma, const PolyMatrix& ginv, int D, int L, Complex H) {
  for (int n = 3; n <= L - 1; ++n) {
    std::vector<TaylorPoly> ds;
    for (int mu = 0; mu < D; ++mu) ds.push_back(sigma.derivative(mu));
    TaylorPoly p(sigma.basis_ptr());
    for (int nu = 0; nu < D; ++nu) {
      TaylorPoly q(sigma.basis_ptr());
      for (int mu = 0; mu < D; ++mu) q += ginv[mu][nu] * ds[mu];
      p += q * ds[nu];
    }
    sigma += partial_degree_part(p, D, n) * (-H / static_cast<double>(n - 1));
  }
}

}  // namespace

Complex SymJet::s(std::span<const int> indices) const {
  const int n = static_cast<int>(indices.size());
  if (n < min_order || n > max_order) return 0.0;
  const Exponent e = exponent_from_indices(indices, dim());
  return kI * std::exp(Complex(0.0, -theta)) * exponent_factorial(e, dim()) * sigma.coeff(e);
}

std::vector<SymJet::Row> SymJet::table() const {
  std::vector<Row> rows;
  const auto& B = sigma.basis();
  for (int n = min_order; n <= max_order; ++n)
    for (std::size_t i = B.degree_begin(n); i < B.degree_end(n); ++i) {
      Row r;
      const auto& e = B.exponent(i);
      for (int v = 0; v < dim(); ++v)
        for (int k = 0; k < e[static_cast<std::size_t>(v)]; ++k) r.indices.push_back(v);
      r.value = s(r.indices);
      rows.push_back(std::move(r));
    }
  return rows;
}

std::string symjet_csv(const SymJet& sj) {
  std::ostringstream os;
  os << "multi_index,re,im\n";
  char buf[128];
  for (const auto& r : sj.table()) {
    std::string idx;
    for (int i : r.indices) idx += std::to_string(i);
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", r.value.real(), r.value.imag());
    os << idx << buf;
  }
  return os.str();
}

SymJet solve_eikonal_jets(const JetPoint& jets, double theta, int L, Frame frame) {
  if (L < 3) throw ContractViolation("eikonal truncation needs L >= 3");
  if (!(theta > 0.0 && theta <= kPi)) throw ContractViolation("theta must lie in (0, pi]");
  const int D = jets.dim();
  const int need = frame == Frame::First ? L : L - 1;
  if (jets.order < need) throw ContractViolation("insufficient jet order for the eikonal recursion");

  const MetricJets m = theta_metric_jets(jets, theta);
  const Complex H = 0.5 * kI * std::exp(Complex(0.0, -theta));
  const Complex c2 = -0.5 * kI * std::exp(Complex(0.0, theta));

  SymJet sj;
  sj.frame = frame;
  sj.base = jets.base;
  sj.theta = theta;
  sj.min_order = 2;
  sj.max_order = L - 1;

  if (frame == Frame::Second) {
    const PolyMatrix ginv = truncate(m.ginv, L - 1);
    TaylorPoly sigma(D, L - 1);
    for (int mu = 0; mu < D; ++mu)
      for (int nu = 0; nu < D; ++nu) {
        Exponent e{};
        ++e[static_cast<std::size_t>(mu)];
        ++e[static_cast<std::size_t>(nu)];
        sigma.set_coeff(e, sigma.coeff(e) + c2 * m.g[mu][nu].constant_term());
      }
    eikonal_recursion(sigma, ginv, D, L, H);
    sj.sigma = std::move(sigma);
    return sj;
  }

  // First frame: run the recursion with the base point displaced by delta,
  // in variables (dy, delta), then re-expand around y.
  const int V = 2 * D;
  const PolyMatrix ginv_d = truncate(m.ginv, L);
  PolyMatrix ginv(static_cast<std::size_t>(D), std::vector<TaylorPoly>(static_cast<std::size_t>(D)));
  std::vector<std::vector<double>> to_delta(static_cast<std::size_t>(D), std::vector<double>(static_cast<std::size_t>(V), 0.0));
  for (int i = 0; i < D; ++i) to_delta[i][D + i] = 1.0;
  TaylorPoly sigma(V, L);
  for (int mu = 0; mu < D; ++mu)
    for (int nu = 0; nu < D; ++nu) {
      ginv[mu][nu] = lift_to_sum(ginv_d[mu][nu]);
      const TaylorPoly g_at_delta = substitute_linear(m.g[mu][nu].with_max_degree(L), V, to_delta);
      sigma += g_at_delta * TaylorPoly::variable(V, L, mu) * TaylorPoly::variable(V, L, nu) * c2;
    }
  eikonal_recursion(sigma, ginv, D, L, H);

  // delta = a - dy
  std::vector<std::vector<double>> sub(static_cast<std::size_t>(V), std::vector<double>(static_cast<std::size_t>(V), 0.0));
  for (int i = 0; i < D; ++i) {
    sub[i][i] = 1.0;
    sub[D + i][D + i] = 1.0;
    sub[D + i][i] = -1.0;
  }
  const TaylorPoly r = substitute_linear(sigma, V, sub);
  TaylorPoly coeffs(D, L - 1);
  std::vector<TaylorPoly> derivs(static_cast<std::size_t>(D), TaylorPoly(D, L - 1));
  const auto& B = r.basis();
  for (std::size_t i = 0; i < B.size(); ++i) {
    const auto& e = B.exponent(i);
    const int ddeg = partial_degree(e, D);
    const int adeg = exponent_degree(e, V) - ddeg;
    if (ddeg > L - 1 || adeg > 1 || r[i] == Complex(0.0)) continue;
    Exponent ey{};
    for (int v = 0; v < D; ++v) ey[static_cast<std::size_t>(v)] = e[static_cast<std::size_t>(v)];
    if (adeg == 0) {
      coeffs.set_coeff(ey, r[i]);
    } else {
      for (int v = 0; v < D; ++v)
        if (e[static_cast<std::size_t>(D + v)] == 1) derivs[v].set_coeff(ey, r[i]);
    }
  }
  // Orders 0 and 1 vanish identically; drop roundoff there.
  for (std::size_t i = 0; i < coeffs.basis().degree_end(1); ++i) coeffs[i] = 0.0;
  sj.sigma = std::move(coeffs);
  sj.base_derivs = std::move(derivs);
  return sj;
}

Complex eikonal_residual(const SymJet& sj, const AdmField& adm, std::span<const double> dy) {
  const int D = sj.dim();
  const Complex H = 0.5 * kI * std::exp(Complex(0.0, -sj.theta));
  std::vector<double> at(sj.base);
  if (sj.frame == Frame::Second)
    for (int mu = 0; mu < D; ++mu) at[mu] += dy[mu];
  const CMatrix ginv = build_theta_metric(adm, sj.theta, at).inverse;
  CVector grad(D);
  for (int mu = 0; mu < D; ++mu) {
    grad(mu) = sj.sigma.derivative(mu).evaluate(dy);
    if (sj.frame == Frame::First) grad(mu) += sj.base_derivs[mu].evaluate(dy);
  }
  return sj.sigma.evaluate(dy) - H * (grad.transpose() * ginv * grad).value();
}

TaylorPoly eikonal_residual_taylor(const SymJet& sj, const JetPoint& jets) {
  const int D = sj.dim();
  const int K = sj.sigma.max_degree();
  const Complex H = 0.5 * kI * std::exp(Complex(0.0, -sj.theta));
  const MetricJets m = theta_metric_jets(jets, sj.theta);
  std::vector<TaylorPoly> grad;
  for (int mu = 0; mu < D; ++mu) {
    TaylorPoly g = sj.sigma.derivative(mu);
    if (sj.frame == Frame::First) g += sj.base_derivs[mu];
    grad.push_back(std::move(g));
  }
  TaylorPoly e = sj.sigma;
  for (int mu = 0; mu < D; ++mu)
    for (int nu = 0; nu < D; ++nu) {
      TaylorPoly gi = sj.frame == Frame::First
                          ? TaylorPoly::constant(D, K, m.ginv[mu][nu].constant_term())
                          : m.ginv[mu][nu].with_max_degree(K);
      e -= gi * grad[mu] * grad[nu] * H;
    }
  return e;
}

ResidualSlope eikonal_residual_slope(const SymJet& sj, const AdmField& adm, std::span<const double> dir, double lo,
                                     double hi, int count) {
  ResidualSlope out;
  double norm = 0.0;
  for (double v : dir) norm += v * v;
  norm = std::sqrt(norm);
  std::vector<double> dy(dir.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < count; ++i) {
    const double t = lo * std::pow(hi / lo, double(i) / (count - 1));
    for (std::size_t k = 0; k < dir.size(); ++k) dy[k] = t * dir[k] / norm;
    const double r = std::abs(eikonal_residual(sj, adm, dy));
    out.radius.push_back(t);
    out.residual.push_back(r);
    out.largest = std::max(out.largest, r);
    if (!(r > 100 * 2.2e-16 * std::abs(sj.evaluate(dy)))) continue;
    const double lx = std::log(t), ly = std::log(r);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    ++out.used;
  }
  const double n = out.used;
  out.slope = out.used >= 3 ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : NAN;
  return out;
}

ConeEstimate real_part_cone(const SymJet& sj, const AdmField& adm, double r, int radial, int directions) {
  const int D = sj.dim();
  ConeEstimate c;
  const ThetaMetric tm = build_theta_metric(adm, sj.theta, sj.base);
  const CMatrix form = -kI * std::exp(Complex(0.0, sj.theta)) * tm.components;
  const RMatrix re = form.real();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (re + re.transpose()), Eigen::EigenvaluesOnly);
  c.form_min = 0.5 * es.eigenvalues().minCoeff();
  c.form_max = 0.5 * es.eigenvalues().maxCoeff();

  std::vector<std::vector<double>> dirs;
  if (D == 2) {
    for (int k = 0; k < directions; ++k) {
      const double a = kPi * k / directions;  // sign symmetric enough for a quadratic lead
      dirs.push_back({std::cos(a), std::sin(a)});
      dirs.push_back({-std::cos(a), -std::sin(a)});
    }
  } else {
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    for (int k = 0; k < directions * D; ++k) {
      std::vector<double> v(static_cast<std::size_t>(D));
      double n2 = 0.0;
      for (auto& x : v) {
        x = nd(rng);
        n2 += x * x;
      }
      for (auto& x : v) x /= std::sqrt(n2);
      dirs.push_back(std::move(v));
    }
    for (int mu = 0; mu < D; ++mu) {
      std::vector<double> v(static_cast<std::size_t>(D), 0.0);
      v[mu] = 1.0;
      dirs.push_back(v);
      v[mu] = -1.0;
      dirs.push_back(v);
    }
  }
  c.c_minus = INFINITY;
  c.c_plus = -INFINITY;
  std::vector<double> dy(static_cast<std::size_t>(D));
  for (int k = 1; k <= radial; ++k) {
    const double rk = r * k / radial;
    for (const auto& u : dirs) {
      for (int mu = 0; mu < D; ++mu) dy[mu] = rk * u[mu];
      const double q = sj.sigma.evaluate(dy).real() / (rk * rk);
      c.c_minus = std::min(c.c_minus, q);
      c.c_plus = std::max(c.c_plus, q);
    }
  }
  if (!(c.c_minus > 0.0)) throw OutsideCone("real part of the Synge jet is not positive on the probe ball");
  return c;
}

}  // namespace wick
