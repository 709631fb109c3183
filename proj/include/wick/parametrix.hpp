#pragma once

#include <vector>

#include "wick/transport.hpp"

namespace wick {

// Local parametrix about a fixed second point y'. Coefficients of s and A_n
// live at y', so F(y, y') is a polynomial expression in dy = y - y'.
struct ParametrixModel {
  TransportModel transport;
  int d = 1;
  // Cached first and second dy-derivatives of s and of each A_n.
  std::vector<TaylorPoly> ds;
  std::vector<std::vector<TaylorPoly>> dds;
  std::vector<std::vector<TaylorPoly>> da;
  std::vector<std::vector<std::vector<TaylorPoly>>> dda;
  double theta() const { return transport.theta; }
  int N() const { return transport.orders.N; }
  const std::vector<double>& base() const { return transport.jets.base; }
};

ParametrixModel build_parametrix(const AdmField& adm, double theta, int N, std::span<const double> yprime);

struct ParametrixEval {
  double theta = 0.0;
  int N = 0;
  Complex zeta = 0.0;
  Complex value = 0.0;
  Complex prefactor = 0.0;  // (-i e^{i th})^{(d-1)/2} / (4 pi zeta)^{(d+1)/2}, principal branches
  Complex s = 0.0;          // s_th(y, y')
  Complex dzeta = 0.0;      // analytic d/dzeta of value
};

// Principal-branch prefactor.
Complex parametrix_prefactor(double theta, int d, Complex zeta);

// Throws ContractViolation unless zeta lies in the sector |Arg zeta| < theta~,
// and OutsideCone if Re s < 0 at y.
ParametrixEval eval_parametrix(const ParametrixModel& m, Complex zeta, std::span<const double> y);
ParametrixEval eval_parametrix(const AdmField& adm, double theta, int N, Complex zeta, std::span<const double> y,
                               std::span<const double> yprime);

// (d_zeta - Delta_{th,y}) F_zeta(y, y') by the chain rule on exact derivatives.
Complex heat_residual(const ParametrixModel& m, const AdmField& adm, Complex zeta, std::span<const double> y);
Complex heat_residual(const AdmField& adm, double theta, int N, Complex zeta, std::span<const double> y,
                      std::span<const double> yprime);

// The same residual assembled from the X, Y, Z decomposition.
Complex heat_residual_xyz(const ParametrixModel& m, const AdmField& adm, Complex zeta, std::span<const double> y);

// Coefficients c_n of zeta^n in (4 pi zeta)^{(d+1)/2} K_zeta(y, y).
std::vector<Complex> predicted_diagonal_series(const AdmField& adm, double theta, int N, std::span<const double> y);

// Smooth compactly supported bump, 1 at r = 0, 0 for r >= radius.
double smooth_cutoff(double r, double radius);

}  // namespace wick
