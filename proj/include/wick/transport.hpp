#pragma once

#include <vector>

#include "wick/eikonal.hpp"

namespace wick {

// L(s) = i e^{-i th} nabla^2 s + 2 i e^{-i th} g^{mu nu} d_mu s d_nu, expanded
// about y' as d(dy) + e^nu(dy) d_nu with polynomial coefficients.
struct LOperatorExpansion {
  int degree = 0;                  // truncation degree of the polynomials
  TaylorPoly d_poly;               // constant term d+1
  std::vector<TaylorPoly> e_poly;  // linear part 2 dy^nu
  Complex constant_term() const { return d_poly.constant_term(); }
  // Symmetric symbols with dy^{mu_1}...dy^{mu_l} d_{mu_1...mu_l} (no 1/l!).
  Complex d(std::span<const int> indices) const;
  Complex e(int nu, std::span<const int> indices) const;
  TaylorPoly apply(const TaylorPoly& a) const;
};

// Transport truncation orders for zeta-order N.
struct TransportOrders {
  int N = 0;
  int L() const { return 2 * N + 8; }
  int c0() const { return 2 * N + 6; }
  int cn() const { return 2 * N + 4; }
  int c(int n) const { return n == 0 ? c0() : cn(); }
};

// `sigma` must be a Second-frame jet with max_order >= degree + 2 and the
// metric jets must have order >= degree + 1.
LOperatorExpansion expand_transport_operator(const MetricJets& metric, const SymJet& sigma, double theta, int degree);

struct TransportSolution {
  int N = 0;
  double theta = 0.0;
  std::vector<double> base;
  std::vector<TaylorPoly> a;         // A_n(y', dy), degree c_n - 1
  std::vector<Complex> diagonal;     // A_n(y') = A_{n,0}
  // Symmetric coefficient A_{n, nu_1...nu_k} with the 1/k! normalisation.
  Complex coefficient(int n, std::span<const int> indices) const;
};

TransportSolution solve_transport(const LOperatorExpansion& lop, const MetricJets& metric, double theta, int N);

// Everything needed at one base point y'.
struct TransportModel {
  TransportOrders orders;
  double theta = 0.0;
  JetPoint jets;
  MetricJets metric;
  SymJet sigma;
  LOperatorExpansion lop;
  TransportSolution solution;
};

TransportModel build_transport(const AdmField& adm, double theta, int N, std::span<const double> base);

struct XYZResidual {
  std::vector<Complex> x;   // X_n, n = 0..N
  Complex y0 = 0.0;
  std::vector<Complex> yz;  // Y_{n+1} + Z_n, n = 0..N-1
  std::vector<Complex> z;   // Z_n, n = 0..N
};

// Exact pointwise values at y = y' + dy.
XYZResidual residual_probe_XYZ(const TransportModel& model, const AdmField& adm, std::span<const double> dy);

}  // namespace wick
