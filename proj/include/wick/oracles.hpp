#pragma once

#include "wick/eikonal.hpp"

namespace wick {

// Independent closed forms used as cross-checks by tests, reports and acceptance.

// Max deviation of the order 2, 3, 4 eikonal coefficients from
//   s_ab = g_ab,  s_abc = -3/2 d_(a g_bc),
//   s_abce = sym[2 d_ab g_ce + g^rq (-1/4 d_r g_ab d_q g_ce + d_r g_ab d_c g_qe - d_a g_rb d_c g_qe)].
struct EikonalClosedForm {
  double order2 = 0.0, order3 = 0.0, order4 = 0.0;
};
EikonalClosedForm eikonal_closed_form_deviation(const AdmField& adm, double theta, std::span<const double> y);

// Scalar curvature of the Euclidean 1+1 metric N^2 dt^2 + ghat (dx + N^x dt)^2
// from Christoffel symbols; field derivatives come straight from the Fourier data.
double euclidean_scalar_curvature_1p1(const AdmField& adm, std::span<const double> y);

// Seeley-DeWitt a_1 = R/6 - V on the Euclidean branch.
double seeley_dewitt_a1(const AdmField& adm, std::span<const double> y);

}  // namespace wick
