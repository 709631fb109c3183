#pragma once

#include <span>
#include <vector>

#include "wick/poly.hpp"

namespace wick {

// A real finite Fourier series on the torus prod_mu [0, P_mu):
//   f(y) = c0 + sum_m [a_m cos(phi_m) + b_m sin(phi_m)],
//   phi_m = sum_mu 2 pi k_{m,mu} y_mu / P_mu.
// Derivatives of every order are exact.
struct FourierMode {
  std::vector<int> k;
  double cos_amp = 0.0;
  double sin_amp = 0.0;
};

class FourierSeries {
 public:
  FourierSeries() = default;
  FourierSeries(int ncoords, double constant) : ncoords_(ncoords), constant_(constant) {}

  int ncoords() const { return ncoords_; }
  double constant() const { return constant_; }
  void set_constant(double c) { constant_ = c; }
  const std::vector<FourierMode>& modes() const { return modes_; }
  void add_mode(FourierMode m);
  bool is_constant() const { return modes_.empty(); }
  // Largest |k_mu| over modes, per coordinate.
  std::vector<int> max_wavenumbers() const;

  double value(std::span<const double> y, std::span<const double> periods) const;
  // d/dy_mu f(y)
  double derivative(std::span<const double> y, std::span<const double> periods, int mu) const;
  // Taylor polynomial around y in the coordinate differences, complete to
  // total degree `order`: coefficient of dy^alpha is (d^alpha f)(y) / alpha!.
  TaylorPoly jet(std::span<const double> y, std::span<const double> periods, int order) const;

 private:
  int ncoords_ = 0;
  double constant_ = 0.0;
  std::vector<FourierMode> modes_;
};

}  // namespace wick
