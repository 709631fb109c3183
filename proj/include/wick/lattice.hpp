#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <span>
#include <ostream>
#include <string>
#include <vector>

#include "wick/geometry.hpp"

namespace wick {

using SpMatR = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using SpMatC = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// Periodic grid on the torus; node coordinates start at 0.
struct TorusGrid {
  std::vector<int> sizes;       // N_t, N_x1..N_xd
  std::vector<double> periods;

  TorusGrid() = default;
  TorusGrid(std::vector<int> sizes, std::vector<double> periods);
  static TorusGrid for_field(const AdmField& adm, std::vector<int> sizes) { return {std::move(sizes), adm.periods}; }

  int dim() const { return static_cast<int>(sizes.size()); }
  double spacing(int mu) const { return periods[mu] / sizes[mu]; }
  double cell_volume() const;
  int total() const;
  int index(std::span<const int> multi) const;  // wraps periodically
  std::vector<int> multi(int i) const;
  std::vector<double> coords(int i) const;
  int shifted(int i, int mu, int step) const;
};

// The two real symmetric positive semidefinite forms behind every Delta_th:
//   W A_th = i e^{i th} P - i e^{-i th} (Q + W V),   W D_- = Q - P + W V.
// P carries the normal direction n = (1, -N^a)/N on t-edges, Q the spatial
// metric on x-edges (LDL^T split for d > 1); both are sums of squares.
struct LatticeForms {
  TorusGrid grid;
  SpMatR P, Q;
  RVector weights;  // |g|^{1/2}(y_i) times the cell volume
  RVector wv;       // weights times V
  std::vector<std::string> warnings;
};

LatticeForms assemble_forms(const TorusGrid& grid, const AdmField& adm);

struct LatticeOperator {
  TorusGrid grid;
  SpMatC matrix;
  RVector weights;
  std::optional<double> theta;  // empty: the Lorentzian D_-
  std::vector<std::string> warnings;
  bool lorentzian() const { return !theta.has_value(); }
  int size() const { return static_cast<int>(matrix.rows()); }
};

// theta empty selects D_-.
LatticeOperator assemble_delta_theta(const LatticeForms& forms, std::optional<double> theta);
LatticeOperator assemble_delta_theta(const TorusGrid& grid, const AdmField& adm, std::optional<double> theta);

// y = A x.  The parallel version splits rows across threads; each row sum runs
// in a fixed order so both agree bit for bit.
void apply(const SpMatC& A, const CVector& x, CVector& y);
void apply_serial(const SpMatC& A, const CVector& x, CVector& y);

Complex weighted_inner(const RVector& w, const CVector& u, const CVector& v);  // sum w u* v

// max |W A - (W B)^H|, relative to max |W A|.
double weighted_adjoint_deviation(const LatticeOperator& a, const LatticeOperator& b);
// max |W A - (W A)^H| relative to max |W A|.
double weighted_hermitian_deviation(const LatticeOperator& a);

// Distance from z to the closed set C \ Sigma_alpha (zero inside it).
double distance_to_complement_sector(Complex z, double alpha);

struct NumericalRangeReport {
  double alpha = 0.0;          // pi/2 + theta~
  double max_distance = 0.0;   // largest distance of a quotient from the allowed set
  double max_relative = 0.0;   // same, relative to |quotient|
  std::vector<Complex> quotients;
  bool pass = false;
};

// Rayleigh quotients <psi, A psi>_w / <psi, psi>_w for random unit vectors
// (fixed seed) plus any vectors in `extra`.
NumericalRangeReport numerical_range_probe(const LatticeOperator& op, int samples, unsigned seed = 1,
                                           const std::vector<CVector>& extra = {}, double tol = 1e-9);

// "row col re im" lines followed by "w i weight" lines.
void export_triplets(const LatticeOperator& op, std::ostream& os);

CMatrix to_dense(const LatticeOperator& op);

// Flat unit-lapse lattice with constant V: the Fourier mode exp(2 pi i k.m/n)
// is an eigenvector with eigenvalue
//   i e^{i th} s_t - i e^{-i th} (sum_a s_a + V),  s_mu = 4 sin^2(pi k_mu/n_mu)/h_mu^2,
// and s_x + V - s_t for the Lorentzian operator.
Complex flat_symbol(const TorusGrid& grid, std::span<const int> k, double V, std::optional<double> theta);
// Eigenvalues in node order: entry i belongs to the mode k = grid.multi(i).
std::vector<Complex> flat_spectrum(const TorusGrid& grid, double V, std::optional<double> theta);
CVector fourier_mode(const TorusGrid& grid, std::span<const int> k);

}  // namespace wick
