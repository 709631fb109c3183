#include "wick/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace wick {

void FourierSeries::add_mode(FourierMode m) {
  if (static_cast<int>(m.k.size()) != ncoords_) throw ContractViolation("Fourier mode has wrong number of wave numbers");
  modes_.push_back(std::move(m));
}

std::vector<int> FourierSeries::max_wavenumbers() const {
  std::vector<int> out(static_cast<std::size_t>(ncoords_), 0);
  for (const auto& m : modes_)
    for (int mu = 0; mu < ncoords_; ++mu) out[mu] = std::max(out[mu], std::abs(m.k[mu]));
  return out;
}

namespace {

double phase(const FourierMode& m, std::span<const double> y, std::span<const double> periods) {
  double phi = 0.0;
  for (std::size_t mu = 0; mu < m.k.size(); ++mu) phi += 2.0 * kPi * m.k[mu] * y[mu] / periods[mu];
  return phi;
}

}  // namespace

double FourierSeries::value(std::span<const double> y, std::span<const double> periods) const {
  double f = constant_;
  for (const auto& m : modes_) {
    const double phi = phase(m, y, periods);
    f += m.cos_amp * std::cos(phi) + m.sin_amp * std::sin(phi);
  }
  return f;
}

double FourierSeries::derivative(std::span<const double> y, std::span<const double> periods, int mu) const {
  double f = 0.0;
  for (const auto& m : modes_) {
    const double phi = phase(m, y, periods);
    const double w = 2.0 * kPi * m.k[mu] / periods[mu];
    f += w * (-m.cos_amp * std::sin(phi) + m.sin_amp * std::cos(phi));
  }
  return f;
}

TaylorPoly FourierSeries::jet(std::span<const double> y, std::span<const double> periods, int order) const {
  TaylorPoly p(ncoords_, order);
  p[0] = constant_;
  const auto& B = p.basis();
  std::vector<double> omega(static_cast<std::size_t>(ncoords_));
  for (const auto& m : modes_) {
    const double phi = phase(m, y, periods);
    for (int mu = 0; mu < ncoords_; ++mu) omega[mu] = 2.0 * kPi * m.k[mu] / periods[mu];
    // d^alpha cos(phi) = omega^alpha cos(phi + |alpha| pi/2), likewise for sin.
    for (std::size_t i = 0; i < B.size(); ++i) {
      const auto& e = B.exponent(i);
      double w = 1.0;
      for (int mu = 0; mu < ncoords_; ++mu) w *= std::pow(omega[mu], e[mu]);
      if (w == 0.0) continue;
      const double shift = phi + 0.5 * kPi * B.degree(i);
      const double d = m.cos_amp * std::cos(shift) + m.sin_amp * std::sin(shift);
      p[i] += w * d / exponent_factorial(e, ncoords_);
    }
  }
  return p;
}

}  // namespace wick
