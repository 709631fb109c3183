#include "wick/kernel_lab.hpp"

#include <Eigen/SparseLU>
#include <cmath>

#include "wick/parametrix.hpp"

namespace wick {

namespace {

using SpMatCC = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

int smallest_integer_above(double x) { return static_cast<int>(std::floor(x)) + 1; }

}  // namespace

double loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double* intercept) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double p = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  if (intercept) *intercept = (sy - p * sx) / n;
  return p;
}

KernelMatrix build_kernel(const LatticeOperator& op, Complex zeta, int threshold) {
  KernelMatrix k;
  k.zeta = zeta;
  k.theta = op.theta.value_or(0.0);
  k.weights = op.weights;
  k.entries = dense_propagator(op, zeta, threshold) * op.weights.cwiseInverse().cast<Complex>().asDiagonal();
  return k;
}

KernelMatrix build_kernel_contour(const LatticeOperator& op, Complex zeta, int quad_points, int threshold) {
  if (op.size() > threshold) throw ContractViolation("kernel size exceeds the dense threshold");
  if (op.lorentzian()) throw ContractViolation("contour kernels need a sectorial operator");
  const ContourPlan plan = plan_contour(*op.theta, {zeta}, quad_points);
  const int M = op.size();
  const CMatrix rhs = CMatrix(op.weights.cwiseInverse().cast<Complex>().asDiagonal());
  std::vector<CMatrix> part(static_cast<std::size_t>(plan.n));
  std::vector<int> failed(static_cast<std::size_t>(plan.n), 0);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < plan.n; ++k) {
    const Complex z = plan.node(k);
    SpMatCC m(op.matrix);
    m *= -1.0;
    for (int i = 0; i < M; ++i) m.coeffRef(i, i) += z;
    m.makeCompressed();
    Eigen::SparseLU<SpMatCC> lu(m);
    if (lu.info() != Eigen::Success) {
      failed[k] = 1;
      continue;
    }
    const Complex c = plan.h / (2.0 * kPi * kI) * std::exp(zeta * z) * plan.node_derivative(k);
    part[k] = c * CMatrix(lu.solve(rhs));
  }
  for (int f : failed)
    if (f) throw ContourBreakdown("resolvent factorization failed while building a contour kernel");
  KernelMatrix out;
  out.zeta = zeta;
  out.theta = *op.theta;
  out.weights = op.weights;
  out.entries = CMatrix::Zero(M, M);
  for (const auto& p : part) out.entries += p;  // node order
  return out;
}

CVector apply_kernel(const KernelMatrix& k, const CVector& psi) {
  return k.entries * CVector(k.weights.cast<Complex>().cwiseProduct(psi));
}

double hermiticity_deviation(const KernelMatrix& k, const KernelMatrix& k_adjoint) {
  return max_abs(k.entries - k_adjoint.entries.adjoint()) / max_abs(k.entries);
}

double chapman_kolmogorov_deviation(const KernelMatrix& k1, const KernelMatrix& k2, const KernelMatrix& k12) {
  const CMatrix prod = k1.entries * k1.weights.cast<Complex>().asDiagonal() * k2.entries;
  return max_abs(prod - k12.entries) / max_abs(k12.entries);
}

HeatResidual heat_equation_residual(const LatticeOperator& op, const KernelMatrix& minus, const KernelMatrix& mid,
                                    const KernelMatrix& plus) {
  const Complex dz = 0.5 * (plus.zeta - minus.zeta);
  if (std::abs(mid.zeta - minus.zeta - dz) > 1e-14 * std::abs(dz))
    throw ContractViolation("heat residual needs equally spaced zeta samples");
  const CMatrix A = to_dense(op);
  const CMatrix AK = A * mid.entries;
  const CMatrix R = (plus.entries - minus.entries) / (2.0 * dz) - AK;
  HeatResidual h;
  const double scale = max_abs(AK);
  h.residual = max_abs(R) / scale;
  h.differencing_bound = std::norm(dz) / 6.0 * max_abs(A * (A * AK)) / scale;
  h.max_imag = R.imag().cwiseAbs().maxCoeff();
  return h;
}

HeatResidual heat_equation_residual(const LatticeOperator& op, Complex zeta, double dz) {
  return heat_equation_residual(op, build_kernel(op, zeta - dz), build_kernel(op, zeta), build_kernel(op, zeta + dz));
}

DiagonalSeries kernel_diagonal(const LatticeOperator& op, std::span<const double> y, const std::vector<double>& zetas,
                               int quad_points) {
  if (op.lorentzian()) throw ContractViolation("kernel diagonals need a sectorial operator");
  const TorusGrid& g = op.grid;
  std::vector<int> m(static_cast<std::size_t>(g.dim()));
  DiagonalSeries s;
  for (int mu = 0; mu < g.dim(); ++mu) {
    m[mu] = static_cast<int>(std::lround(y[mu] / g.spacing(mu)));
    s.h = std::max(s.h, g.spacing(mu));
  }
  s.node = g.index(m);
  std::vector<Complex> zs(zetas.begin(), zetas.end());
  CVector e = CVector::Zero(op.size());
  e[s.node] = 1.0 / op.weights[s.node];
  const auto res = evolve_contour_plan(op, plan_contour(*op.theta, zs, quad_points), zs, e);
  s.zeta = zetas;
  for (const auto& r : res) s.diag.push_back(r.state[s.node]);
  return s;
}

RichardsonSeries richardson(const std::vector<DiagonalSeries>& levels) {
  if (levels.size() < 2) throw ContractViolation("Richardson extrapolation needs two grids");
  const std::size_t L = levels.size();
  const auto& c = levels[L - 2];
  const auto& f = levels[L - 1];
  if (std::abs(c.h / f.h - 2.0) > 1e-12) throw ContractViolation("Richardson levels must halve the spacing");
  RichardsonSeries r;
  r.zeta = f.zeta;
  for (std::size_t i = 0; i < f.zeta.size(); ++i) {
    if (c.zeta[i] != f.zeta[i]) throw ContractViolation("Richardson levels must share the zeta grid");
    r.value.push_back((4.0 * f.diag[i] - c.diag[i]) / 3.0);
    r.error_estimate.push_back(std::abs(f.diag[i] - c.diag[i]) / 3.0);
  }
  if (L >= 3) {
    const auto& cc = levels[L - 3];
    double acc = 0.0;
    for (std::size_t i = 0; i < f.zeta.size(); ++i)
      acc += std::log2(std::abs(cc.diag[i] - c.diag[i]) / std::abs(c.diag[i] - f.diag[i]));
    r.observed_order = acc / static_cast<double>(f.zeta.size());
  }
  return r;
}

std::vector<double> default_fit_window(double h_coarse, double period, int count) {
  const double lo = 25 * h_coarse * h_coarse, hi = std::pow(period / 8.0, 2);
  if (!(lo < hi) || count < 2) throw FitWindowError("fit window [25 h^2, (period/8)^2] is empty");
  std::vector<double> z;
  for (int i = 0; i < count; ++i) z.push_back(lo * std::pow(hi / lo, double(i) / (count - 1)));
  return z;
}

namespace {

std::vector<Complex> normalised_diagonal(const RichardsonSeries& s, int d, double theta) {
  const Complex phase = std::pow(-kI * std::exp(Complex(0.0, theta)), 0.5 * (d - 1));
  std::vector<Complex> out;
  for (std::size_t i = 0; i < s.zeta.size(); ++i)
    out.push_back(std::pow(4 * kPi * s.zeta[i], 0.5 * (d + 1)) * s.value[i] / phase);
  return out;
}

}  // namespace

DiagonalFit fit_diagonal_asymptotics(const RichardsonSeries& s, const AdmField& adm, double theta,
                                     std::span<const double> y, int n_fit) {
  const int np = n_fit + 1;
  const int m = static_cast<int>(s.zeta.size());
  if (m < np + 1) throw FitWindowError("too few zeta samples for the requested fit order");
  const Complex q = kI * std::exp(Complex(0.0, -theta));
  const auto data = normalised_diagonal(s, adm.d, theta);
  // Columns scaled by the largest |q zeta|^n so the condition number reflects the window.
  const double zmax = *std::max_element(s.zeta.begin(), s.zeta.end());
  CMatrix V(m, np);
  CVector b(m);
  for (int i = 0; i < m; ++i) {
    for (int n = 0; n < np; ++n) V(i, n) = std::pow(q * s.zeta[i] / zmax, n);
    b[i] = data[i];
  }
  Eigen::JacobiSVD<CMatrix> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto sv = svd.singularValues();
  DiagonalFit fit;
  fit.condition = sv(0) / sv(np - 1);
  if (!(fit.condition < 1e8)) throw FitWindowError("ill-conditioned diagonal fit; widen the zeta window");
  const CVector c = svd.solve(b);
  for (int n = 0; n < np; ++n) fit.fitted.push_back(c[n] / std::pow(zmax, n));
  fit.residual = (V * c - b).cwiseAbs().maxCoeff();
  const TransportModel t = build_transport(adm, theta, n_fit, y);
  for (int n = 0; n < np; ++n) {
    fit.predicted.push_back(t.solution.diagonal[n]);
    fit.deviation.push_back(std::abs(fit.fitted[n] - fit.predicted[n]) / std::max(std::abs(fit.predicted[n]), 1e-12));
  }
  return fit;
}

RemainderFit difference_to_parametrix(const RichardsonSeries& s, const AdmField& adm, double theta, int N,
                                      std::span<const double> y) {
  const auto data = normalised_diagonal(s, adm.d, theta);
  const TransportModel t = build_transport(adm, theta, N, y);
  const Complex q = kI * std::exp(Complex(0.0, -theta));
  RemainderFit r;
  r.N = N;
  r.zeta = s.zeta;
  const double norm0 = std::pow(4 * kPi, 0.5 * (adm.d + 1));
  bool below = true;
  for (std::size_t i = 0; i < s.zeta.size(); ++i) {
    Complex f = 0.0, qn = 1.0;
    for (int n = 0; n <= N; ++n) {
      f += t.solution.diagonal[n] * qn;
      qn *= q * s.zeta[i];
    }
    r.remainder.push_back(std::abs(data[i] - f));
    const double floor = s.error_estimate[i] * norm0 * std::pow(s.zeta[i], 0.5 * (adm.d + 1));
    below = below && r.remainder.back() < 0.05 * floor;
  }
  r.super_polynomial = below;
  double icpt = 0.0;
  r.exponent = loglog_fit(r.zeta, r.remainder, &icpt);
  r.prefactor = std::exp(icpt);
  const int sigma0 = smallest_integer_above((adm.d + 1) / 4.0);
  r.c_theory = 2.0 * sigma0 + 0.5 * (adm.d + 1);
  r.meets_weak_bound = r.super_polynomial || r.exponent >= N + 1 - r.c_theory - 0.5;
  return r;
}

double cm_surrogate(const TorusGrid& g, const CVector& u, int m) {
  // Breadth-first over derivative orders; each level applies one more
  // centred difference along a nondecreasing direction.
  struct Item {
    CVector v;
    int last;
  };
  std::vector<Item> level = {{u, 0}};
  double total = u.cwiseAbs().maxCoeff();
  for (int order = 1; order <= m; ++order) {
    std::vector<Item> next;
    for (const auto& it : level)
      for (int mu = it.last; mu < g.dim(); ++mu) {
        CVector dv(u.size());
        for (int i = 0; i < g.total(); ++i)
          dv[i] = (it.v[g.shifted(i, mu, 1)] - it.v[g.shifted(i, mu, -1)]) / (2 * g.spacing(mu));
        total += dv.cwiseAbs().maxCoeff();
        next.push_back({std::move(dv), mu});
      }
    level = std::move(next);
  }
  return total;
}

std::vector<SmoothingFit> smoothing_rate_probe(const LatticeOperator& op, const CVector& psi,
                                               const std::vector<double>& zetas, int m_max, int quad_points) {
  std::vector<Complex> zs(zetas.begin(), zetas.end());
  const auto res = evolve_contour_many(op, zs, psi, quad_points);
  const int d = op.grid.dim() - 1;
  std::vector<SmoothingFit> out;
  for (int m = 0; m <= m_max; ++m) {
    SmoothingFit f;
    f.m = m;
    f.sigma_m = smallest_integer_above(0.5 * m + 0.25 * (d + 1));
    f.zeta = zetas;
    for (const auto& r : res) f.norm.push_back(cm_surrogate(op.grid, r.state, m));
    // Scan sigma; log c is the mean offset for each trial.
    double best = INFINITY;
    for (double sg = 0.0; sg <= 6.0; sg += 1e-3) {
      double mean = 0.0;
      for (std::size_t i = 0; i < zetas.size(); ++i) mean += std::log(f.norm[i]) - std::log1p(std::pow(zetas[i], -sg));
      mean /= static_cast<double>(zetas.size());
      double ss = 0.0;
      for (std::size_t i = 0; i < zetas.size(); ++i) {
        const double e = std::log(f.norm[i]) - mean - std::log1p(std::pow(zetas[i], -sg));
        ss += e * e;
      }
      if (ss < best) {
        best = ss;
        f.exponent = sg;
        f.c = std::exp(mean);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace wick
