#pragma once

#include <span>
#include <string>
#include <vector>

#include "wick/geometry.hpp"

namespace wick {

// Which argument of sigma(y, y') the coefficients are evaluated at.
// Second: sigma = sum c_a(y') dy^a, dy = y - y'; all derivatives act on dy
// only and the recursion is purely algebraic.  First: coefficients at y.
enum class Frame { First, Second };

// Truncated Synge jet.  `sigma` holds the monomial coefficients c_a of
// sigma(dy) = -i e^{i th} sum 1/n! s_{mu...} dy^mu..., so that
// s_a = i e^{-i th} a! c_a for the sorted multi-index with exponent a.
struct SymJet {
  Frame frame = Frame::First;
  std::vector<double> base;
  double theta = 0.0;
  int min_order = 2;
  int max_order = 0;
  TaylorPoly sigma;
  // First frame only: d/dy^mu of every coefficient function, as polynomials
  // in dy with the same layout as `sigma`.
  std::vector<TaylorPoly> base_derivs;

  int dim() const { return sigma.nvars(); }
  // Symmetric tensor coefficient; indices need not be sorted.
  Complex s(std::span<const int> indices) const;
  Complex evaluate(std::span<const double> dy) const { return sigma.evaluate(dy); }

  struct Row {
    std::vector<int> indices;  // nondecreasing
    Complex value;
  };
  // One row per canonical multi-index of order min_order..max_order.
  std::vector<Row> table() const;
};

std::string symjet_csv(const SymJet& sj);

// Solves E[sigma] = 0 order by order for orders 2..L-1.  The First frame
// needs jets of order L (one more than the coefficients themselves, so that
// the coefficient derivatives are exact); the Second frame needs L-1.
SymJet solve_eikonal_jets(const JetPoint& jets, double theta, int L, Frame frame = Frame::First);

// E[sigma] = sigma - (i/2) e^{-i th} g_th^{mu nu}(y) d_mu sigma d_nu sigma at
// (y, y') = (base, base - dy) for the First frame and (base + dy, base) for
// the Second; evaluated exactly for the truncated sigma.
Complex eikonal_residual(const SymJet& sj, const AdmField& adm, std::span<const double> dy);

// Taylor polynomial of E[sigma] in dy through degree max_order (exact
// coefficients; they vanish through order max_order when solved).
TaylorPoly eikonal_residual_taylor(const SymJet& sj, const JetPoint& jets);

struct ConeEstimate {
  double c_minus = 0.0;
  double c_plus = 0.0;
  // 1/2 of the extreme eigenvalues of Re(-i e^{i th} g^th) at the base point.
  double form_min = 0.0;
  double form_max = 0.0;
};

// min/max of Re sigma(y, y - dy)/|dy|^2 over |dy| <= r, probing `radial`
struct ResidualSlope {
  double slope = 0.0;
  int used = 0;  // samples above the roundoff floor
  double largest = 0.0;  // largest residual, floor samples included
  bool exact() const { return used == 0; }  // truncation exact to roundoff
  std::vector<double> radius, residual;
};

// Log-log slope of |residual(t dir)| over a geometric t grid in [lo, hi].
// Samples below 100 eps |sigma| sit on the roundoff floor and are dropped.
ResidualSlope eikonal_residual_slope(const SymJet& sj, const AdmField& adm, std::span<const double> dir, double lo,
                                     double hi, int count = 12);

// radii and `directions` unit vectors (a lattice on the sphere for d >= 2).
// Throws OutsideCone when the minimum is not positive.
ConeEstimate real_part_cone(const SymJet& sj, const AdmField& adm, double r, int radial = 8, int directions = 64);

}  // namespace wick
