#pragma once

#include <random>

#include "mixodyn/model.hpp"

namespace mixodyn::testing {

/// Parameter set used throughout the (x_star, a2) diagram.
inline ScaledParams diagram_params(double x_star, double a2) {
  return make_saturated(0.2, 0.95, x_star, 8.5, a2, 50.0, 55.0);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

/// Dimensional parameters that pass validation and scale cleanly. With
/// `zero_b4` the mixotroph grazing handling time is zero.
inline ChemostatParams draw_chemostat(std::mt19937_64& rng, bool zero_b4 = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    ChemostatParams p;
    p.C = 0.5 + 4.5 * u(rng);
    p.D = 0.05 + 0.95 * u(rng);
    p.A1 = 0.5 + 9.5 * u(rng);
    p.A2 = 0.5 + 9.5 * u(rng);
    p.A3 = 0.5 + 9.5 * u(rng);
    p.A4 = 0.5 + 9.5 * u(rng);
    const double bmax = 0.9 / p.D;
    p.B1 = bmax * u(rng) * 0.5;
    p.B2 = bmax * u(rng) * 0.5;
    p.B3 = bmax * u(rng) * 0.5;
    p.B4 = zero_b4 ? 0.0 : bmax * u(rng) * 0.5;
    try {
      nondimensionalize(p);
      return p;
    } catch (...) {
    }
  }
}

}  // namespace mixodyn::testing
