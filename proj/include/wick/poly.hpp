#pragma once

// Truncated multivariate Taylor polynomials with complex coefficients.
//
// A TaylorPoly in n variables keeps every monomial of total degree <= K.
// Products, derivatives and series functions truncate at K, so the
// polynomials behave as jets of order K.  Monomials are stored graded
// (all degree-0 terms, then degree-1, ...) which makes the homogeneous
// parts contiguous.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wick/types.hpp"

namespace wick {

inline constexpr int kMaxVars = 8;
using Exponent = std::array<std::uint8_t, kMaxVars>;

class MonomialBasis {
 public:
  // Shared, cached basis for (nvars, max_degree).  Thread safe.
  static std::shared_ptr<const MonomialBasis> get(int nvars, int max_degree);

  int nvars() const { return nvars_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return exps_.size(); }

  const Exponent& exponent(std::size_t i) const { return exps_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  std::size_t degree_begin(int d) const { return offsets_[static_cast<std::size_t>(d)]; }
  std::size_t degree_end(int d) const { return offsets_[static_cast<std::size_t>(d) + 1]; }

  std::int64_t key(std::size_t i) const { return keys_[i]; }
  // Index of the monomial with the given additive key, or -1 if absent.
  std::int64_t index_of_key(std::int64_t key) const { return table_[static_cast<std::size_t>(key)]; }
  std::int64_t key_of(const Exponent& e) const;
  std::size_t index_of(const Exponent& e) const;

  MonomialBasis(int nvars, int max_degree);

 private:
  int nvars_;
  int max_degree_;
  std::vector<Exponent> exps_;
  std::vector<int> degrees_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int64_t> keys_;
  std::vector<std::int64_t> table_;
};

// alpha! = prod alpha_i!
double exponent_factorial(const Exponent& e, int nvars);
// Exponent vector counting the occurrences of each index in a multi-index.
Exponent exponent_from_indices(std::span<const int> indices, int nvars);
int exponent_degree(const Exponent& e, int nvars);

class TaylorPoly {
 public:
  TaylorPoly() = default;
  TaylorPoly(int nvars, int max_degree);
  explicit TaylorPoly(std::shared_ptr<const MonomialBasis> basis);

  static TaylorPoly constant(int nvars, int max_degree, Complex value);
  // The coordinate polynomial y_var.
  static TaylorPoly variable(int nvars, int max_degree, int var);

  int nvars() const { return basis_->nvars(); }
  int max_degree() const { return basis_->max_degree(); }
  std::size_t size() const { return coeffs_.size(); }
  const MonomialBasis& basis() const { return *basis_; }
  const std::shared_ptr<const MonomialBasis>& basis_ptr() const { return basis_; }

  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  Complex coeff(const Exponent& e) const;
  void set_coeff(const Exponent& e, Complex v);
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<Complex> coefficients() { return coeffs_; }

  Complex constant_term() const { return coeffs_[0]; }

  TaylorPoly& operator+=(const TaylorPoly& o);
  TaylorPoly& operator-=(const TaylorPoly& o);
  TaylorPoly& operator*=(Complex s);
  TaylorPoly& operator+=(Complex s);

  friend TaylorPoly operator+(TaylorPoly a, const TaylorPoly& b) { return a += b; }
  friend TaylorPoly operator-(TaylorPoly a, const TaylorPoly& b) { return a -= b; }
  friend TaylorPoly operator*(TaylorPoly a, Complex s) { return a *= s; }
  friend TaylorPoly operator*(Complex s, TaylorPoly a) { return a *= s; }
  friend TaylorPoly operator-(TaylorPoly a) { return a *= Complex(-1.0); }
  friend TaylorPoly operator*(const TaylorPoly& a, const TaylorPoly& b);

  // out += a*b restricted to total degree exactly `degree`.
  static void accumulate_product_degree(const TaylorPoly& a, const TaylorPoly& b, int degree,
                                        TaylorPoly& out);

  TaylorPoly derivative(int var) const;
  TaylorPoly homogeneous_part(int degree) const;
  // Keeps degrees [lo, hi].
  TaylorPoly degree_range(int lo, int hi) const;
  TaylorPoly with_max_degree(int max_degree) const;

  Complex evaluate(std::span<const double> point) const;
  Complex evaluate(std::span<const Complex> point) const;

  // Series functions of a polynomial with nonzero constant term.
  TaylorPoly reciprocal() const;
  TaylorPoly sqrt() const;

  double max_abs() const;
  double max_abs_degree(int degree) const;

 private:
  std::shared_ptr<const MonomialBasis> basis_;
  std::vector<Complex> coeffs_;
};

// Maps p(z) in n variables to p(x + w) in 2n variables (x first, w second).
TaylorPoly lift_to_sum(const TaylorPoly& p);
// Substitutes a general linear map z_i = sum_j M[i][j] u_j (u has `out_vars`
// variables); degree is preserved.
TaylorPoly substitute_linear(const TaylorPoly& p, int out_vars,
                             const std::vector<std::vector<double>>& map);

using PolyMatrix = std::vector<std::vector<TaylorPoly>>;

PolyMatrix poly_matmul(const PolyMatrix& a, const PolyMatrix& b);
// Inverse of a square polynomial matrix whose constant part is invertible.
PolyMatrix poly_inverse(const PolyMatrix& m);

}  // namespace wick
