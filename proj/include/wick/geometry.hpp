#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "wick/fourier.hpp"
#include "wick/poly.hpp"

namespace wick {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Foliation data on the torus with coordinates y = (t, x^1..x^d).
struct AdmField {
  int d = 1;
  std::vector<double> periods;      // 1+d lengths
  FourierSeries lapse;              // N
  std::vector<FourierSeries> shift; // N^a
  std::vector<FourierSeries> ghat;  // d*d, row-major, kept symmetric
  FourierSeries potential;          // V

  int dim() const { return d + 1; }
  const FourierSeries& spatial(int a, int b) const { return ghat[static_cast<std::size_t>(a * d + b)]; }
  FourierSeries& spatial(int a, int b) { return ghat[static_cast<std::size_t>(a * d + b)]; }

  // N=1, N^a=0, ghat=I, V=v.
  static AdmField flat(int d, std::vector<double> periods, double v = 0.0);

  // Samples N > margin, ghat positive definite with margin and V >= 0 on a
  // grid four times finer than the Nyquist grid of the data.
  void validate(double margin = 1e-6) const;
  // Largest |k| per coordinate across all fields.
  std::vector<int> max_wavenumbers() const;
};

struct AdmSample {
  double lapse = 1.0;
  RVector shift;
  RMatrix ghat;
  double potential = 0.0;
};

AdmSample sample_adm(const AdmField& adm, std::span<const double> y);

struct ThetaMetric {
  double theta = 0.0;
  CMatrix components;  // g^theta_{mu nu}
  CMatrix inverse;     // g_theta^{mu nu}
  double density = 0.0;
};

ThetaMetric build_theta_metric(const AdmField& adm, double theta, std::span<const double> y);

// Exact Taylor data of every ADM field at a base point.
struct JetPoint {
  std::vector<double> base;
  int order = 0;
  TaylorPoly lapse;
  std::vector<TaylorPoly> shift;
  std::vector<TaylorPoly> ghat;  // d*d row-major
  TaylorPoly potential;
  int d = 1;
  int dim() const { return d + 1; }
};

JetPoint make_jet(const AdmField& adm, std::span<const double> y, int order);

// Metric, inverse and density as polynomials in the coordinate difference.
struct MetricJets {
  int order = 0;
  PolyMatrix g;
  PolyMatrix ginv;
  TaylorPoly density;
  TaylorPoly potential;
};

// `lapse_phase` multiplies -N^2 in g_00: e^{-2i theta} for g^theta, -1 for
// g^+ and +1 for g^-.  The inverse uses the closed ADM form unless
// `closed_form_inverse` is false, in which case the polynomial matrix is
// inverted directly.
MetricJets adm_metric_jets(const JetPoint& jet, Complex lapse_phase, bool closed_form_inverse = true);
MetricJets theta_metric_jets(const JetPoint& jet, double theta);

// gamma^mu = rho^{-1} d_nu(rho g^{nu mu}); exact through degree order-1.
std::vector<TaylorPoly> gamma_vector(const MetricJets& m);
CVector gamma_vector(const AdmField& adm, double theta, const JetPoint& jet);

// rho^{-1} d_mu(rho g^{mu nu} d_nu u), exact through degree order-2.
TaylorPoly laplace_beltrami(const MetricJets& m, const TaylorPoly& u);

double combination_identity_check(const AdmField& adm, double theta, std::span<const double> y);

// (-sin th D_+ - i cos th D_-) u at the base point of `u_jet`.
Complex apply_delta_theta(const AdmField& adm, double theta, const TaylorPoly& u_jet, std::span<const double> y);
// i e^{-i th}(g_th^{mu nu} d d u + gamma^mu d u - V u) at the same point.
Complex apply_delta_theta_metric(const AdmField& adm, double theta, const TaylorPoly& u_jet,
                                 std::span<const double> y);

}  // namespace wick
