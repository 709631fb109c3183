#pragma once

#include <vector>

#include "wick/semigroup.hpp"

namespace wick {

// K[i, j] = (T(zeta) e_j)[i] / w_j, so that (T psi)_i = sum_j w_j K[i, j] psi_j.
struct KernelMatrix {
  Complex zeta = 0.0;
  double theta = 0.0;
  CMatrix entries;
  RVector weights;
};

KernelMatrix build_kernel(const LatticeOperator& op, Complex zeta, int threshold = kDenseThreshold);
// Same kernel through contour quadrature: every node factorization solves all columns.
KernelMatrix build_kernel_contour(const LatticeOperator& op, Complex zeta, int quad_points = 0,
                                  int threshold = kDenseThreshold);

CVector apply_kernel(const KernelMatrix& k, const CVector& psi);

// max |K^th_zeta[i, j] - conj(K^{pi-th}_{zeta*}[j, i])| relative to max |K|.
double hermiticity_deviation(const KernelMatrix& k, const KernelMatrix& k_adjoint);
// max |sum_k w_k K1[i, k] K2[k, j] - K12[i, j]| relative to max |K12|.
double chapman_kolmogorov_deviation(const KernelMatrix& k1, const KernelMatrix& k2, const KernelMatrix& k12);

struct HeatResidual {
  double residual = 0.0;            // max |dK/dzeta - A K| / max |A K|, centred differences
  double differencing_bound = 0.0;  // dz^2/6 max |A^3 K| / max |A K|
  double max_imag = 0.0;            // largest |Im| of the residual entries
};

// Kernels at zeta - dz, zeta, zeta + dz.
HeatResidual heat_equation_residual(const LatticeOperator& op, const KernelMatrix& minus, const KernelMatrix& mid,
                                    const KernelMatrix& plus);
HeatResidual heat_equation_residual(const LatticeOperator& op, Complex zeta, double dz);

// Kernel diagonal K(y, y) at the grid node nearest y, for real zetas.
struct DiagonalSeries {
  double h = 0.0;  // largest spacing of the grid
  int node = 0;
  std::vector<double> zeta;
  std::vector<Complex> diag;
};

DiagonalSeries kernel_diagonal(const LatticeOperator& op, std::span<const double> y, const std::vector<double>& zetas,
                               int quad_points = 0);

// Levels coarse to fine with the spacing halved each time.  Two levels
// extrapolate assuming O(h^2); three also measure the order from the data.
struct RichardsonSeries {
  std::vector<double> zeta;
  std::vector<Complex> value;
  std::vector<double> error_estimate;  // |K_fine - K_coarse| / 3
  double observed_order = 0.0;         // 0 when only two levels
};

RichardsonSeries richardson(const std::vector<DiagonalSeries>& levels);

// Geometric zeta grid in [25 h^2, (period/8)^2]; throws FitWindowError when empty.
std::vector<double> default_fit_window(double h_coarse, double period, int count);

struct DiagonalFit {
  std::vector<Complex> fitted;     // A^_n, n = 0..n_fit
  std::vector<Complex> predicted;  // transport A_n(y)
  std::vector<double> deviation;   // |A^_n - A_n| / max(|A_n|, floor)
  double condition = 0.0;
  double residual = 0.0;  // max |data - fit| on the window
};

// (4 pi zeta)^{(d+1)/2} K(y, y) / (-i e^{i th})^{(d-1)/2} ~ sum A^_n (i e^{-i th} zeta)^n.
DiagonalFit fit_diagonal_asymptotics(const RichardsonSeries& s, const AdmField& adm, double theta,
                                     std::span<const double> y, int n_fit);

struct RemainderFit {
  int N = 0;
  std::vector<double> zeta;
  std::vector<double> remainder;  // |(K - F^N)(y, y)| normalised as in the diagonal fit
  double exponent = 0.0;          // least-squares p in c zeta^p
  double prefactor = 0.0;
  bool super_polynomial = false;  // every remainder below 5% of the lattice error estimate
  double c_theory = 0.0;          // 2 sigma_0 + (d+1)/2
  bool meets_weak_bound = false;  // p >= N + 1 - c_theory - 0.5
};

RemainderFit difference_to_parametrix(const RichardsonSeries& s, const AdmField& adm, double theta, int N,
                                      std::span<const double> y);

// Sum over |beta| <= m of max |delta^beta u| with centred differences.
double cm_surrogate(const TorusGrid& grid, const CVector& u, int m);

struct SmoothingFit {
  int m = 0;
  int sigma_m = 0;  // smallest integer > m/2 + (d+1)/4
  double exponent = 0.0;
  double c = 0.0;
  std::vector<double> zeta, norm;
};

// Fits c (1 + zeta^{-sigma}) to the C^m surrogate of T(zeta) psi.
std::vector<SmoothingFit> smoothing_rate_probe(const LatticeOperator& op, const CVector& psi,
                                               const std::vector<double>& zetas, int m_max = 2, int quad_points = 0);

double loglog_fit(const std::vector<double>& x, const std::vector<double>& y, double* intercept = nullptr);

}  // namespace wick
