#pragma once

#include "wick/geometry.hpp"

namespace wick {

// Lapse 1 + 0.2 cos(kx), ghat 1 + 0.3 cos(kx), optional shift 1 + ... on a square torus.
AdmField curved_1p1(double period, double potential = 0.0, double shift_amp = 0.0);

// Random smooth ADM data in 1+d with a few low modes; positive by margin.
AdmField random_adm(int d, unsigned seed, double amp = 0.15, bool potential = true);

}  // namespace wick
