#include "wick/semigroup.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <random>
#include <sstream>

namespace wick {

namespace {

using SpMatCC = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

void require_dense(const LatticeOperator& op, int threshold) {
  if (op.size() > threshold)
    throw ContractViolation("operator of size " + std::to_string(op.size()) + " exceeds the dense threshold " +
                            std::to_string(threshold) + "; use the contour route");
}

SpMatCC shifted(const LatticeOperator& op, Complex z) {
  SpMatCC m(op.matrix);
  m *= -1.0;
  for (int i = 0; i < op.size(); ++i) m.coeffRef(i, i) += z;
  m.makeCompressed();
  return m;
}

void require_sectorial(const LatticeOperator& op) {
  if (op.lorentzian()) throw ContractViolation("D_- generates a group, not a sectorial semigroup");
}

}  // namespace

EvolutionResult evolve_dense(const LatticeOperator& op, Complex zeta, const CVector& psi, int threshold) {
  require_dense(op, threshold);
  EvolutionResult r;
  r.zeta = zeta;
  r.method = EvolutionResult::Method::Dense;
  r.state = zeta == Complex(0.0) ? psi : CVector(dense_expm(to_dense(op), zeta) * psi);
  return r;
}

CMatrix dense_propagator(const LatticeOperator& op, Complex zeta, int threshold) {
  require_dense(op, threshold);
  return dense_expm(to_dense(op), zeta);
}

CVector expm_action(const LatticeOperator& op, Complex zeta, const CVector& psi, double tol) {
  RVector colsum = RVector::Zero(op.size());
  for (Eigen::Index r = 0; r < op.matrix.outerSize(); ++r)
    for (SpMatC::InnerIterator it(op.matrix, r); it; ++it) colsum[it.index()] += std::abs(it.value());
  const double a = std::abs(zeta) * colsum.maxCoeff();
  const int steps = std::max(1, static_cast<int>(std::ceil(a)));
  const Complex dz = zeta / double(steps);
  CVector x = psi;
  for (int s = 0; s < steps; ++s) {
    CVector term = x, acc = x;
    const double scale = x.norm();
    // |dz| ||A|| <= 1, so terms decay at least like 1/k!.
    for (int k = 1; k < 40; ++k) {
      term = (dz / double(k)) * (op.matrix * term);
      acc += term;
      if (term.norm() <= tol * scale) break;
    }
    x = std::move(acc);
  }
  return x;
}

Complex ContourPlan::node(int k) const {
  const double u = (k - 0.5 * (n - 1)) * h;
  return mu * (1.0 - std::sin(Complex(alpha, -u)));
}

Complex ContourPlan::node_derivative(int k) const {
  const double u = (k - 0.5 * (n - 1)) * h;
  return kI * mu * std::cos(Complex(alpha, -u));
}

ContourPlan plan_contour(double theta, const std::vector<Complex>& zetas, int points) {
  if (points == 0) {
    // Smallest count whose modelled error reaches 1e-12.
    ContourPlan p;
    for (int n = 16; n <= 512; n += 8) {
      p = plan_contour(theta, zetas, n);
      if (p.log_error <= std::log(1e-12)) break;
    }
    return p;
  }
  if (points < 16) throw ContractViolation("contour quadrature needs at least 16 points");
  if (zetas.empty()) throw ContractViolation("no zeta values to plan for");
  const double tt = theta_tilde(theta);
  double phi = 0.0, tmin = INFINITY, tmax = 0.0;
  for (Complex z : zetas) {
    if (z == Complex(0.0)) continue;
    phi = std::max(phi, std::abs(std::arg(z)));
    tmin = std::min(tmin, std::abs(z));
    tmax = std::max(tmax, std::abs(z));
  }
  if (tmax == 0.0) throw ContractViolation("all zeta values are zero");
  if (!(phi < tt)) throw ContractViolation("zeta outside the sector Sigma_theta~");
  ContourPlan p;
  p.n = points;
  p.log_error = INFINITY;
  // Error model over (alpha, h) with mu balancing the two leading terms:
  //   spectrum side of the strip     exp(-2 pi d+ / h),     d+ = theta~ - alpha
  //   far side of the strip          exp(mu tmax s1 - 2 pi d- / h), d- = 0.9 (alpha - phi)
  //   truncation at |u| = n h / 2    exp(mu tmin (1 - sin(alpha - phi) cosh(n h / 2)))
  for (int ia = 1; ia < 64; ++ia) {
    const double alpha = phi + (tt - phi) * ia / 64.0;
    const double dp = tt - alpha, dm = 0.9 * (alpha - phi);
    const double s1 = 1.0 - std::sin(alpha - dm);
    const double sa = std::sin(alpha - phi);
    for (double h = 1e-3; h < 3.0; h *= 1.01) {
      const double ch = sa * std::cosh(0.5 * points * h);
      if (ch <= 1.0) continue;
      const double mu = (2 * kPi * dm / h) / (tmax * s1 + tmin * (ch - 1.0));
      const double le = std::max(mu * tmin * (1.0 - ch), -2 * kPi * dp / h);
      if (le < p.log_error) {
        p.log_error = le;
        p.h = h;
        p.mu = mu;
        p.alpha = alpha;
        p.strip = std::min(dp, dm);
      }
    }
  }
  if (!std::isfinite(p.log_error)) throw ContourBreakdown("no admissible contour parameters");
  return p;
}

std::vector<EvolutionResult> evolve_contour_plan(const LatticeOperator& op, const ContourPlan& plan,
                                                 const std::vector<Complex>& zetas, const CVector& psi) {
  require_sectorial(op);
  const int n = plan.n;
  std::vector<CVector> x(static_cast<std::size_t>(n));
  std::vector<std::string> failure(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < n; ++k) {
    const Complex z = plan.node(k);
    Eigen::SparseLU<SpMatCC> lu;
    lu.compute(shifted(op, z));
    if (lu.info() != Eigen::Success) {
      std::ostringstream os;
      os << "resolvent factorization failed at node " << k << ", lambda = " << z << " (mu " << plan.mu << ", alpha "
         << plan.alpha << ")";
      failure[k] = os.str();
      continue;
    }
    x[k] = lu.solve(psi);
    if (!x[k].allFinite()) {
      std::ostringstream os;
      os << "non-finite resolvent solve at node " << k << ", lambda = " << z;
      failure[k] = os.str();
    }
  }
  for (const auto& f : failure)
    if (!f.empty()) throw ContourBreakdown(f);

  const double psinorm = weighted_norm(op.weights, psi);
  std::vector<EvolutionResult> out;
  for (Complex zeta : zetas) {
    EvolutionResult r;
    r.zeta = zeta;
    r.method = EvolutionResult::Method::Contour;
    r.nodes = n;
    if (zeta == Complex(0.0)) {
      r.state = psi;
      out.push_back(std::move(r));
      continue;
    }
    CVector all = CVector::Zero(psi.size()), even = CVector::Zero(psi.size());
    for (int k = 0; k < n; ++k) {  // fixed node order
      const Complex c = plan.h / (2.0 * kPi * kI) * std::exp(zeta * plan.node(k)) * plan.node_derivative(k);
      all += c * x[k];
      if (k % 2 == 0) even += 2.0 * c * x[k];
    }
    r.state = std::move(all);
    r.embedded_difference = weighted_norm(op.weights, r.state - even);
    r.error_estimate = std::exp(plan.log_error) * psinorm;
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<EvolutionResult> evolve_contour_many(const LatticeOperator& op, const std::vector<Complex>& zetas,
                                                 const CVector& psi, int quad_points) {
  require_sectorial(op);
  return evolve_contour_plan(op, plan_contour(*op.theta, zetas, quad_points), zetas, psi);
}

EvolutionResult evolve_contour(const LatticeOperator& op, Complex zeta, const CVector& psi, int quad_points) {
  if (zeta == Complex(0.0)) {
    EvolutionResult r;
    r.method = EvolutionResult::Method::Contour;
    r.state = psi;
    return r;
  }
  return evolve_contour_many(op, {zeta}, psi, quad_points).front();
}

ResolventSample resolvent_norm(const LatticeOperator& op, Complex lambda, int max_iter, double tol) {
  ResolventSample s;
  s.lambda = lambda;
  Eigen::SparseLU<SpMatCC> lu;
  lu.compute(shifted(op, lambda));
  if (lu.info() != Eigen::Success) throw ContourBreakdown("lambda is numerically in the spectrum");
  const RVector& w = op.weights;
  const CVector wc = w.cast<Complex>();
  // B = R^{+w} R is self-adjoint in <.,.>_w; Lanczos with full
  // reorthogonalisation (a Krylov-accelerated power iteration) for its top
  // eigenvalue ||R||_w^2.
  auto applyB = [&](const CVector& x) {
    const CVector y = lu.solve(x);
    const CVector z = lu.adjoint().solve(CVector(wc.cwiseProduct(y)));
    return CVector(z.cwiseQuotient(wc));
  };
  const int m = std::min(max_iter, op.size());
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  std::vector<CVector> V;
  CVector v(op.size());
  for (auto& x : v) x = Complex(nd(rng), nd(rng));
  v /= weighted_norm(w, v);
  std::vector<double> alpha, beta;
  double est = 0.0;
  for (int j = 0; j < m; ++j) {
    V.push_back(v);
    CVector u = applyB(v);
    alpha.push_back(weighted_inner(w, v, u).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : V) u -= weighted_inner(w, q, u) * q;
    const double b = weighted_norm(w, u);
    const int k = static_cast<int>(alpha.size());
    RMatrix T = RMatrix::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> es(T, Eigen::EigenvaluesOnly);
    const double top = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    s.iterations = j + 1;
    if ((j > 0 && std::abs(top - est) <= tol * top) || b <= 1e-14 * top * top) {
      est = top;
      s.converged = true;
      break;
    }
    est = top;
    beta.push_back(b);
    v = u / b;
  }
  s.norm = est;
  return s;
}

std::vector<ResolventSample> resolvent_norm_scan(const LatticeOperator& op, const std::vector<Complex>& lambdas) {
  std::vector<ResolventSample> out(lambdas.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < lambdas.size(); ++i) out[i] = resolvent_norm(op, lambdas[i]);
  return out;
}

ContractReport semigroup_contract_suite(const LatticeOperator& op, const LatticeOperator& op_adjoint, Complex z1,
                                        Complex z2, const std::vector<CVector>& psis, int quad_points) {
  require_sectorial(op);
  require_sectorial(op_adjoint);
  if (std::abs(*op.theta + *op_adjoint.theta - kPi) > 1e-14)
    throw ContractViolation("adjoint operator must be assembled at pi - theta");
  const SectorSpec sec{theta_tilde(*op.theta)};
  if (!sec.contains(z1) || !sec.contains(z2) || !sec.contains(z1 + z2))
    throw ContractViolation("zeta values must lie in Sigma_theta~");
  const RVector& w = op.weights;
  const CMatrix A = to_dense(op);
  const CMatrix T1 = dense_expm(A, z1), T2 = dense_expm(A, z2), T12 = dense_expm(A, z1 + z2);
  ContractReport rep;

  for (const auto& psi : psis) {
    const double n = weighted_norm(w, psi);
    rep.semigroup_law = std::max(rep.semigroup_law, weighted_norm(w, T12 * psi - T1 * (T2 * psi)) / n);
  }
  for (const CMatrix* T : {&T1, &T2, &T12}) rep.max_norm = std::max(rep.max_norm, weighted_opnorm(w, *T));

  const CMatrix Ad = to_dense(op_adjoint);
  for (Complex z : {z1, z2, z1 + z2}) {
    const CMatrix T = z == z1 ? T1 : (z == z2 ? T2 : T12);
    const CMatrix lhs = weighted_adjoint(w, T);
    const CMatrix rhs = dense_expm(Ad, std::conj(z));
    rep.adjoint_law = std::max(rep.adjoint_law, (lhs - rhs).cwiseAbs().maxCoeff() / T.cwiseAbs().maxCoeff());
  }

  // (d) on the first probe vector; h scaled by the Gershgorin radius.
  if (!psis.empty()) {
    double rho = 0.0;
    for (Eigen::Index r = 0; r < A.rows(); ++r) rho = std::max(rho, A.row(r).cwiseAbs().sum());
    const CVector& psi = psis.front();
    const CVector apsi = A * psi;
    std::vector<double> hs, es;
    for (int k = 0; k < 4; ++k) {
      const double h = 0.05 / rho * std::pow(0.5, k);
      const CVector d = (dense_expm(A, h) * psi - psi) / h - apsi;
      hs.push_back(h);
      es.push_back(weighted_norm(w, d) / weighted_norm(w, apsi));
    }
    rep.generator_h = hs;
    rep.generator_error = es;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const double lx = std::log(hs[i]), ly = std::log(es[i]);
      sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
    }
    const double m = static_cast<double>(hs.size());
    rep.generator_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  }

  // (e) A^n T(z) = (A T(z/n))^n.
  const Complex z = z1 + z2;
  CMatrix AnT = T12;
  for (int n = 1; n <= 3; ++n) {
    AnT = A * AnT;
    rep.power_norm[n - 1] = weighted_opnorm(w, AnT);
    rep.power_bound[n - 1] = std::pow(weighted_opnorm(w, A * dense_expm(A, z / double(n))), n);
    rep.power_constant[n - 1] = std::abs(z) * std::pow(rep.power_norm[n - 1], 1.0 / n) / n;
  }

  if (quad_points >= 0) {
    for (const auto& psi : psis) {
      const EvolutionResult c[3] = {evolve_contour(op, z1, psi, quad_points), evolve_contour(op, z2, psi, quad_points),
                                    evolve_contour(op, z1 + z2, psi, quad_points)};
      const CVector d1 = T1 * psi, d2 = T2 * psi, d12 = T12 * psi;
      const CVector* ref[3] = {&d1, &d2, &d12};
      for (int k = 0; k < 3; ++k)
        rep.contour_vs_dense = std::max(rep.contour_vs_dense, weighted_norm(w, c[k].state - *ref[k]) /
                                                                  weighted_norm(w, *ref[k]));
    }
  }
  return rep;
}

}  // namespace wick
