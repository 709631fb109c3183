#pragma once

#include <array>
#include <string>
#include <vector>

#include "wick/dense.hpp"

namespace wick {

// Sigma_alpha = { z != 0 : |Arg z| < alpha }.
struct SectorSpec {
  double alpha = 0.0;
  bool contains(Complex z) const { return z != Complex(0.0) && std::abs(std::arg(z)) < alpha; }
};

struct EvolutionResult {
  enum class Method { Contour, Dense };
  Complex zeta = 0.0;
  CVector state;
  Method method = Method::Dense;
  double error_estimate = 0.0;       // model bound on the quadrature error (weighted norm)
  double embedded_difference = 0.0;  // || S_h - S_{2h} ||_w from the odd/even node split
  int nodes = 0;
};

inline constexpr int kDenseThreshold = 4096;

EvolutionResult evolve_dense(const LatticeOperator& op, Complex zeta, const CVector& psi,
                             int threshold = kDenseThreshold);
CMatrix dense_propagator(const LatticeOperator& op, Complex zeta, int threshold = kDenseThreshold);

// exp(zeta A) psi by truncated Taylor steps with |zeta| ||A||_1 / steps <= 1;
// sparse matvecs only, so any size and any operator (Lorentzian included).
CVector expm_action(const LatticeOperator& op, Complex zeta, const CVector& psi, double tol = 1e-16);

// lambda(u) = mu (1 - sin(alpha - i u)), u_k = (k - (n-1)/2) h.  Asymptotic
// half-angle pi/2 + alpha; crosses the real axis at mu (1 - sin alpha) > 0.
struct ContourPlan {
  double alpha = 0.0;
  double strip = 0.0;  // half-width of the analyticity strip used in the model
  double mu = 0.0;
  double h = 0.0;
  int n = 0;
  double log_error = 0.0;  // natural log of the modelled relative error
  Complex node(int k) const;
  Complex node_derivative(int k) const;
};

// One contour for every zeta in the list; needs |Arg zeta| < theta~ for all.
// points == 0 picks the smallest count whose modelled error is below 1e-12.
ContourPlan plan_contour(double theta, const std::vector<Complex>& zetas, int points);

EvolutionResult evolve_contour(const LatticeOperator& op, Complex zeta, const CVector& psi, int quad_points = 48);  // 0: auto
// Shares the resolvent solves across all zetas.
std::vector<EvolutionResult> evolve_contour_many(const LatticeOperator& op, const std::vector<Complex>& zetas,
                                                 const CVector& psi, int quad_points);
// Same with an explicit plan; exposes the node solves for reuse.
std::vector<EvolutionResult> evolve_contour_plan(const LatticeOperator& op, const ContourPlan& plan,
                                                 const std::vector<Complex>& zetas, const CVector& psi);

struct ResolventSample {
  Complex lambda = 0.0;
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// || (lambda - A)^{-1} ||_w from the top eigenvalue of R^{+w} R (Lanczos).
ResolventSample resolvent_norm(const LatticeOperator& op, Complex lambda, int max_iter = 200, double tol = 1e-13);
std::vector<ResolventSample> resolvent_norm_scan(const LatticeOperator& op, const std::vector<Complex>& lambdas);

struct ContractReport {
  double semigroup_law = 0.0;        // (a) max relative || T(z1+z2) psi - T(z1) T(z2) psi ||_w
  double max_norm = 0.0;             // (b) max || T(z) ||_w over z1, z2, z1+z2
  double adjoint_law = 0.0;          // (c) max |T_th(z)^{+w} - T_{pi-th}(z*)| / max |T|
  std::vector<double> generator_h;   // (d)
  std::vector<double> generator_error;
  double generator_slope = 0.0;
  std::array<double, 3> power_norm{};   // (e) || A^n T(z) ||_w, n = 1..3, z = z1 + z2
  std::array<double, 3> power_bound{};  //     || A T(z/n) ||_w^n
  std::array<double, 3> power_constant{};  // |z| ||A^n T(z)||^{1/n} / n
  double contour_vs_dense = 0.0;     // max relative difference of the two routes
  bool contractive(double tol = 1e-10) const { return max_norm <= 1.0 + tol; }
};

ContractReport semigroup_contract_suite(const LatticeOperator& op, const LatticeOperator& op_adjoint, Complex z1,
                                        Complex z2, const std::vector<CVector>& psis, int quad_points = 0);
// quad_points < 0 skips the contour comparison; 0 chooses the count per zeta.

}  // namespace wick
