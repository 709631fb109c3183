#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "wick/geometry.hpp"

namespace wick {

struct Tolerances {
  double wedge = 1e-9;           // angular, radians
  double spectrum = 1e-10;       // flat multiset distance
  double resolvent = 1e-8;       // |lambda| ||R|| <= 1 + this
  double sector_constant = 1.1;  // C = this / sin(th~ - th~')
  double law = 1e-10;            // semigroup, adjoint, contractivity
  double contour = 1e-8;
  double closed_form = 1e-10;
  double oracle = 1e-8;          // a_1 oracle
  double potential = 1e-10;      // (-V)^n / n!
  double fit_a0 = 0.02;
  double fit_a1 = 0.05;
  double kernel = 1e-10;         // reproduction, Hermiticity
  double chapman = 1e-9;
  double unitary = 1e-11;
  double closed_gap = 1e-10;
  double trend_factor = 3.0;
};

Tolerances tolerance_profile(const std::string& name);

struct RunConfig {
  std::string preset = "curved";  // curved | flat | random
  double period = 2 * kPi;
  double potential = 0.0;
  double shift = 0.0;
  int dim = 1;  // spatial dimension, random preset only
  unsigned seed = 1;
  // Extra Fourier modes appended to the preset: "kt kx cos sin" per mode.
  std::map<std::string, std::vector<FourierMode>> modes;

  std::vector<int> grid = {24, 24};
  std::vector<double> thetas = {kPi / 6, kPi / 4, kPi / 2};
  std::vector<Complex> zetas = {0.05, 0.1, Complex(0.05, 0.02)};
  int order = 3;
  std::string profile = "default";
  Tolerances tol;
  std::string out = "wick_out";

  int resolvent_samples = 50;

  std::vector<int> kernel_levels = {32, 64, 128};
  double kernel_period = 1.0;
  std::vector<double> fit_thetas = {kPi / 2, kPi / 3};
  int fit_points = 8;
  int smoothing_grid = 32;

  std::vector<double> limit_s = {0.25, 0.5};
  std::vector<double> limit_thetas = {0.4, 0.2, 0.1, 0.05};
  int limit_probes = 3;
  int limit_rank = 2;

  // Echo of every key actually set, in file order.
  std::vector<std::pair<std::string, std::string>> echo;
};

// key = value lines, '#' comments.  Unknown keys, bad values and out-of-range
// numbers raise ConfigError with the line number.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
// Applies one key; used by the parser and by command-line overrides.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, int line = 0);
void validate(const RunConfig& cfg);

// Preset geometry at the given period (defaults to cfg.period).
AdmField build_geometry(const RunConfig& cfg);
AdmField build_geometry(const RunConfig& cfg, double period);

// "pi/4", "3*pi/4", "0.7", "2pi"
double parse_angle(const std::string& s);
// "0.05", "0.05+0.02i", "-0.1i"
Complex parse_complex(const std::string& s);

}  // namespace wick
