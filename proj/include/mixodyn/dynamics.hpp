#pragma once

#include <array>

#include "mixodyn/model.hpp"

namespace mixodyn {

/// Dimensionless autotroph (x), herbivore (y) and mixotroph (z) densities.
struct State3 {
  double x = 0.0, y = 0.0, z = 0.0;

  std::array<double, 3> as_array() const noexcept { return {x, y, z}; }
  static State3 from_array(const std::array<double, 3>& a) noexcept {
    return {a[0], a[1], a[2]};
  }
  friend bool operator==(const State3&, const State3&) = default;
};

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Jacobian3 = std::array<std::array<double, 3>, 3>;

/// The six functions that organize the isocline form of the saturated
/// system. All are evaluated in simplified algebraic form.
struct StructuralValues {
  double f1 = 0.0, f2 = 0.0;
  double F1 = 0.0, F2 = 0.0;
  double psi = 0.0;
  double G = 0.0;
};

/// First derivatives of the structural functions with respect to x.
struct StructuralDerivatives {
  double df1 = 0.0, df2 = 0.0;
  double dF1 = 0.0, dF2 = 0.0;
  double dpsi = 0.0;
  double dG = 0.0;
};

// Full four-species chemostat, dimensional time T. Returns (dS, dX, dY, dZ).
Vec4 rhs_chemostat(const ChemostatState& s, const ChemostatParams& p);

// Nutrient eliminated via S = C - X - Y - Z. Throws ManifoldViolation if
// X + Y + Z > C.
Vec3 rhs_reduced(double X, double Y, double Z, const ChemostatParams& p);

// General scaled system with gamma/kappa saturation terms.
Vec3 rhs_scaled(const State3& s, const ScaledParams& sp);

// Saturated system in the original scaled time tau.
Vec3 rhs_saturated(const State3& s, const ScaledParams& sp);

// Isocline form; equals rhs_saturated times (1 + b2 x) / k.
Vec3 rhs_isocline(const State3& s, const ScaledParams& sp);

StructuralValues eval_structural_functions(double x, const ScaledParams& sp);
StructuralDerivatives eval_structural_derivatives(double x, const ScaledParams& sp);

/// x where F1 has its positive critical point, or a negative value when
/// b1 <= 1 + 1/a1 (no positive critical point).
double f1_hump(double a1, double b1) noexcept;

/// Jacobian of the isocline-form system.
Jacobian3 jacobian_saturated(const State3& s, const ScaledParams& sp);

/// Jacobian of rhs_saturated (original time); drives the variational
/// equation for Lyapunov estimates.
Jacobian3 jacobian_rhs_saturated(const State3& s, const ScaledParams& sp);

}  // namespace mixodyn
