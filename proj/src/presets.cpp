#include "wick/presets.hpp"

#include <random>

namespace wick {

AdmField curved_1p1(double period, double potential, double shift_amp) {
  auto adm = AdmField::flat(1, {period, period}, potential);
  adm.lapse.add_mode({{0, 1}, 0.2, 0.0});
  adm.spatial(0, 0).add_mode({{0, 1}, 0.3, 0.0});
  if (shift_amp != 0.0) adm.shift[0].add_mode({{0, 1}, shift_amp, 0.0});
  return adm;
}

AdmField random_adm(int d, unsigned seed, double amp, bool potential) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> periods(static_cast<std::size_t>(d + 1), 1.0);
  periods[0] = 1.3;
  auto adm = AdmField::flat(d, periods, potential ? 0.8 : 0.0);
  auto add_modes = [&](FourierSeries& f, double a) {
    for (int m = 0; m < 2; ++m) {
      FourierMode mode;
      for (int mu = 0; mu <= d; ++mu) mode.k.push_back(static_cast<int>(rng() % 3) - 1);
      mode.cos_amp = a * u(rng);
      mode.sin_amp = a * u(rng);
      f.add_mode(mode);
    }
  };
  add_modes(adm.lapse, amp);
  for (auto& s : adm.shift) add_modes(s, amp);
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      add_modes(adm.spatial(a, b), a == b ? amp : 0.3 * amp);
      adm.spatial(b, a) = adm.spatial(a, b);
    }
  if (potential) add_modes(adm.potential, 0.2);
  return adm;
}

}  // namespace wick
