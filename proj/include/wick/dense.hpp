#pragma once

#include <vector>

#include "wick/lattice.hpp"

namespace wick {

// exp(zeta A) by scaling and squaring with Pade approximants.
CMatrix dense_expm(const CMatrix& A, Complex zeta);

// Eigenvalues of a general complex matrix (LAPACK zgeev).
std::vector<Complex> dense_eigenvalues(const CMatrix& A);
// Same, then each value replaced by the two-sided quotient u^H A v / u^H v of its
// left and right zgeev vectors.  Second order in the vector error.
std::vector<Complex> dense_eigenvalues_refined(const CMatrix& A);

// Operator norm in <u, v>_w = sum w u* v: || W^{1/2} B W^{-1/2} ||_2.
double weighted_opnorm(const RVector& w, const CMatrix& B);
double weighted_norm(const RVector& w, const CVector& v);

// W^{-1} B^H W, the adjoint in the weighted inner product.
CMatrix weighted_adjoint(const RVector& w, const CMatrix& B);

// Worst distance under greedy nearest matching of two eigenvalue multisets.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);
// Largest angular intrusion max(0, alpha - |Arg z|) into Sigma_alpha; points with
// |z| <= zero_floor count as the origin, which lies outside every sector.
double sector_angular_excess(const std::vector<Complex>& z, double alpha, double zero_floor);

}  // namespace wick
