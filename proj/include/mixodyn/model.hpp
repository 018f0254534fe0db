#pragma once

#include <string>
#include <vector>

namespace mixodyn {

/// Dimensional parameters of the nutrient-autotroph-herbivore-mixotroph
/// chemostat. Index convention: 1 autotroph nutrient uptake, 2 mixotroph
/// nutrient uptake, 3 herbivore grazing, 4 mixotroph grazing. All
/// conversion factors are fixed to one, which makes S + X + Y + Z relax
/// to C and allows the nutrient to be eliminated.
struct ChemostatParams {
  double C = 0.0;
  double D = 0.0;
  double A1 = 0.0, A2 = 0.0, A3 = 0.0, A4 = 0.0;
  double B1 = 0.0, B2 = 0.0, B3 = 0.0, B4 = 0.0;
};

struct ChemostatState {
  double S = 0.0, X = 0.0, Y = 0.0, Z = 0.0;
};

/// Dimensionless parameters. `m` is carried only so that the identity
/// m = a1 / (1 + b1 x_star) can be checked; no equation reads it.
struct ScaledParams {
  double c = 0.0;
  double k = 0.0;
  double x_star = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
  double gamma1 = 0.0, kappa1 = 0.0;
  double gamma2 = 0.0, kappa2 = 0.0;
  double m = 0.0;

  bool saturated() const noexcept {
    return gamma1 == 0.0 && kappa1 == 0.0 && gamma2 == 0.0 && kappa2 == 0.0;
  }
};

struct ValidationReport {
  bool condition_A = false;
  bool condition_B_global = false;
  bool condition_B_local = false;
  std::vector<std::string> messages;

  bool admissible() const noexcept { return condition_A && condition_B_local; }
};

/// Throws Error(InvalidParams) when positivity or 1 - D*Bi > 0 fails.
void check_invariants(const ChemostatParams& p);

/// Throws Error(InvalidParams) when a ScaledParams invariant fails.
void check_invariants(const ScaledParams& sp);

/// Throws Error(NotSaturated) unless all gamma/kappa terms vanish.
void require_saturated(const ScaledParams& sp);

/// Builds a saturated parameter set directly in scaled form, filling `m`
/// and validating.
ScaledParams make_saturated(double c, double k, double x_star, double a1, double a2,
                            double b1, double b2);

ValidationReport validate_trade_offs(const ChemostatParams& p);

ScaledParams nondimensionalize(const ChemostatParams& p);

/// Upper bound on a2 implied by the local herbivore-superiority condition:
/// a1 (1 + b2 x_star) / (1 + b1 x_star).
double mixotroph_efficiency_bound(const ScaledParams& sp) noexcept;

}  // namespace mixodyn
