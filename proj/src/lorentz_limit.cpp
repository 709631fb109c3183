#include "wick/lorentz_limit.hpp"

#include <random>

namespace wick {

SchrodingerGroup::SchrodingerGroup(const LatticeOperator& op, double herm_tol) {
  if (!op.lorentzian()) throw ContractViolation("Schrodinger group needs the Lorentzian operator");
  if (op.size() > kDenseThreshold) throw ContractViolation("Schrodinger group size exceeds the dense threshold");
  if (weighted_hermitian_deviation(op) > herm_tol)
    throw ContractViolation("operator is not Hermitian in the weighted inner product");
  sqrt_w_ = op.weights.cwiseSqrt();
  CMatrix H = sqrt_w_.cast<Complex>().asDiagonal() * to_dense(op) * sqrt_w_.cwiseInverse().cast<Complex>().asDiagonal();
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  lambda_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

CVector SchrodingerGroup::apply(double s, const CVector& psi, int sign) const {
  const CVector x = vectors_.adjoint() * CVector(sqrt_w_.cast<Complex>().cwiseProduct(psi));
  CVector ph(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) ph[k] = std::exp(Complex(0.0, sign * s * lambda_[k])) * x[k];
  return sqrt_w_.cwiseInverse().cast<Complex>().cwiseProduct(vectors_ * ph);
}

CVector schrodinger_group(const LatticeOperator& op, double s, const CVector& psi) {
  return SchrodingerGroup(op).apply(s, psi);
}

Complex weighted_dot(const RVector& w, const CVector& a, const CVector& b) {
  return (a.conjugate().cwiseProduct(w.cast<Complex>()).cwiseProduct(b)).sum();
}

Complex TraceProbe::trace(const RVector& w) const {
  Complex t = 0.0;
  for (int r = 0; r < rank(); ++r) t += weighted_dot(w, v[r], u[r]);
  return t;
}

GapRow trace_gap(const LatticeOperator& op_theta, const LatticeOperator& op_adjoint, const SchrodingerGroup& group,
                 const TraceProbe& probe) {
  GapRow row;
  row.theta = op_theta.theta.value_or(0.0);
  row.s = probe.s;
  row.rank = probe.rank();
  Complex t = 0.0, ta = 0.0, ref = 0.0, refa = 0.0;
  const RVector& w = op_theta.weights;
  for (int r = 0; r < probe.rank(); ++r) {
    t += weighted_dot(w, probe.v[r], expm_action(op_theta, probe.s, probe.u[r]));
    ta += weighted_dot(w, probe.v[r], expm_action(op_adjoint, probe.s, probe.u[r]));
    ref += weighted_dot(w, probe.v[r], group.apply(probe.s, probe.u[r], -1));
    refa += weighted_dot(w, probe.v[r], group.apply(probe.s, probe.u[r], +1));
  }
  row.gap = std::abs(t - ref);
  row.gap_adjoint = std::abs(ta - refa);
  return row;
}

std::vector<GapRow> trace_gap_scan(const TorusGrid& grid, const AdmField& adm, const TraceProbe& probe) {
  const auto forms = assemble_forms(grid, adm);
  const SchrodingerGroup group(assemble_delta_theta(forms, std::nullopt));
  std::vector<GapRow> rows(probe.thetas.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(probe.thetas.size()); ++i) {
    const double th = probe.thetas[i];
    rows[i] = trace_gap(assemble_delta_theta(forms, th), assemble_delta_theta(forms, kPi - th), group, probe);
  }
  return rows;
}

Complex flat_trace_closed_form(const TorusGrid& grid, double V, const TraceProbe& probe, std::optional<double> theta,
                               int sign) {
  // Modes are orthogonal with <phi_k, phi_k>_w = M * cell volume (weights are the cell volume when flat).
  const double norm2 = grid.total() * grid.cell_volume();
  const double vol = grid.cell_volume();
  Complex tr = 0.0;
  for (int i = 0; i < grid.total(); ++i) {
    const auto k = grid.multi(i);
    const CVector phi = fourier_mode(grid, k);
    const Complex lam = flat_symbol(grid, k, V, theta);
    const Complex e = theta ? std::exp(probe.s * lam) : std::exp(Complex(0.0, sign * probe.s * lam.real()));
    for (int r = 0; r < probe.rank(); ++r)
      tr += e * (vol * probe.v[r].dot(phi)) * (vol * phi.dot(probe.u[r])) / norm2;
  }
  return tr;
}

TraceProbe smooth_probe(const TorusGrid& grid, int rank, unsigned seed, double s, std::vector<double> thetas,
                        int max_mode) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_int_distribution<int> km(-max_mode, max_mode);
  auto field = [&] {
    CVector f = CVector::Zero(grid.total());
    for (int term = 0; term < 3; ++term) {
      std::vector<int> k(static_cast<std::size_t>(grid.dim()));
      for (auto& x : k) x = km(rng);
      f += Complex(nd(rng), nd(rng)) * fourier_mode(grid, k);
    }
    return f;
  };
  TraceProbe p;
  p.s = s;
  p.thetas = std::move(thetas);
  for (int r = 0; r < rank; ++r) {
    p.u.push_back(field());
    p.v.push_back(field());
  }
  return p;
}

bool decreasing_trend(const std::vector<double>& gaps, double factor) {
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (!(gaps[i] < gaps[i - 1])) return false;
  return gaps.size() < 2 || gaps.back() < gaps.front() / factor;
}

}  // namespace wick
