#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mixodyn/equilibria.hpp"

namespace mixodyn {

/// Routh-Hurwitz in matrix form for a 3x3 matrix:
///   (i) tr A < 0, (ii) det A < 0, (iii) tr A * (sum of principal 2x2 minors) - det A < 0.
struct RHVerdict {
  double trace = 0.0;
  double minor_sum = 0.0;
  double det = 0.0;
  double third = 0.0;  // tr * minor_sum - det
  bool trace_neg = false;
  bool det_neg = false;
  bool third_neg = false;
  bool stable = false;
  bool marginal = false;    // det or third within tolerance of zero
  int failing_criterion = 0;  // first failing criterion (1..3), 0 when stable
};

/// Scaled criteria closer than this to zero are flagged marginal.
inline constexpr double kMarginalTolerance = 1e-9;

RHVerdict routh_hurwitz(const Jacobian3& a);

/// Frobenius norm, used to scale the criteria for marginality tests.
double frobenius_norm(const Jacobian3& a) noexcept;

/// Smallest norm-scaled distance of the three criteria from zero.
double criterion_margin(const RHVerdict& v, const Jacobian3& a) noexcept;

using Eigenvalues3 = std::array<std::complex<double>, 3>;

/// Closed-form roots of det(A - lambda I) with one Newton polish per root.
/// Throws Error(IllConditioned) if the residual bound is not met.
Eigenvalues3 eigenvalue_oracle(const Jacobian3& a);

enum class OverallStability { Stable, Saddle, Unstable, HopfBoundary };
std::string_view to_string(OverallStability s) noexcept;

/// Verdict inside the invariant coordinate plane that holds the equilibrium
/// (or along its coordinate axis for the axis equilibria).
struct PlanarVerdict {
  bool stable = false;
  double trace = 0.0;
  double det = 0.0;
  bool marginal = false;
};

struct EquilibriumClassification {
  EquilibriumKind kind = EquilibriumKind::Washout;
  PlanarVerdict planar;
  std::optional<double> transversal_eigenvalue;
  OverallStability overall = OverallStability::Saddle;
  bool marginal = false;
  std::optional<RHVerdict> rh;  // set for the coexistence equilibrium
};

EquilibriumClassification classify_equilibrium(const EquilibriumRecord& e,
                                               const ScaledParams& sp);

enum class SufficientStability { StableBySufficientCriteria, Inconclusive };

/// Sufficient conditions F1'(x*) < 0, G'(x*) > 0, f1 f2' - f1' f2 > 0 at x*.
/// Throws Error(NoCoexistence) when the coexistence equilibrium is absent.
SufficientStability coexistence_sufficient_stability(const ScaledParams& sp);

enum class Plane { PredatorPrey, Competition };

enum class Regime {
  UniqueLimitCycle,
  GloballyStableEq,
  ConvergesToEquilibrium,
  CyclesPossible,
};

enum class ConvergenceReason { GDecreasing, F2Decreasing, NoInteriorEquilibria };

std::string_view to_string(Regime r) noexcept;
std::string_view to_string(ConvergenceReason r) noexcept;

struct PlaneRegime {
  Plane plane = Plane::PredatorPrey;
  Regime regime = Regime::GloballyStableEq;
  std::optional<ConvergenceReason> reason;
  std::vector<std::pair<std::string, double>> witnesses;
  std::optional<bool> comp_plus_planar_stable;

  std::optional<double> witness(std::string_view name) const;
};

PlaneRegime predator_prey_regime(const ScaledParams& sp);
PlaneRegime competition_plane_regime(const ScaledParams& sp);

/// Planar stability of (x, 0, F2(x)) in the competition plane via the
/// corner block: det = f2 G (G' - F2'), trace = f2 F2' - G.
PlanarVerdict competition_planar_verdict(double x, const ScaledParams& sp);

}  // namespace mixodyn
