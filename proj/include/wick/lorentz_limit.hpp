#pragma once

#include <vector>

#include "wick/semigroup.hpp"

namespace wick {

// exp(-i s A_-) through the eigendecomposition of the symmetrised
// Hermitian matrix W^{1/2} A_- W^{-1/2}; built once, applied many times.
class SchrodingerGroup {
 public:
  explicit SchrodingerGroup(const LatticeOperator& lorentzian, double herm_tol = 1e-12);
  // sign = -1 gives exp(-i s A_-), sign = +1 the adjoint group exp(+i s A_-).
  CVector apply(double s, const CVector& psi, int sign = -1) const;
  const RVector& eigenvalues() const { return lambda_; }

 private:
  RVector sqrt_w_;
  RVector lambda_;
  CMatrix vectors_;
};

CVector schrodinger_group(const LatticeOperator& lorentzian, double s, const CVector& psi);

// T = sum_r u_r <v_r, .>_w
struct TraceProbe {
  std::vector<CVector> u, v;
  double s = 0.0;
  std::vector<double> thetas;  // decreasing, positive
  int rank() const { return static_cast<int>(u.size()); }
  // tr[T E] = sum_r <v_r, E u_r>_w
  Complex trace(const RVector& w) const;
};

Complex weighted_dot(const RVector& w, const CVector& a, const CVector& b);  // <a, b>_w, antilinear in a

struct GapRow {
  double theta = 0.0;
  double s = 0.0;
  int rank = 0;
  double gap = 0.0;          // |tr[T e^{s D_th}] - tr[T e^{-i s A_-}]|
  double gap_adjoint = 0.0;  // |tr[T e^{s D_{pi-th}}] - tr[T e^{+i s A_-}]|
};

// Operators on one grid: op_theta at th, op_adjoint at pi - th.
GapRow trace_gap(const LatticeOperator& op_theta, const LatticeOperator& op_adjoint, const SchrodingerGroup& group,
                 const TraceProbe& probe);

// Assembles both branches for every probe angle; angles run in parallel.
std::vector<GapRow> trace_gap_scan(const TorusGrid& grid, const AdmField& adm, const TraceProbe& probe);

// Flat unit-lapse closed form from the Fourier eigenbasis; theta = nullopt
// returns the Lorentzian reference trace.
Complex flat_trace_closed_form(const TorusGrid& grid, double V, const TraceProbe& probe,
                               std::optional<double> theta, int sign = -1);

// Smooth rank-r probe: u_r, v_r are random low-mode trigonometric fields (fixed seed).
TraceProbe smooth_probe(const TorusGrid& grid, int rank, unsigned seed, double s, std::vector<double> thetas,
                        int max_mode = 2);

// Strictly decreasing along the list and last < first / factor.
bool decreasing_trend(const std::vector<double>& gaps, double factor = 3.0);

}  // namespace wick
