#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mixodyn/dynamics.hpp"

namespace mixodyn {

enum class EquilibriumKind {
  Washout,           // (0, 0, 0)
  CarryingCapacity,  // (1, 0, 0)
  MixotrophCC,       // (0, 0, c)
  PredatorPrey,      // (x_star, F1(x_star), 0)
  CompetitionMinus,  // (x_-, 0, F2(x_-))
  CompetitionPlus,   // (x_+, 0, F2(x_+))
  Coexistence,       // (x_star, y_star, z_star)
};

std::string_view to_string(EquilibriumKind kind) noexcept;

struct EquilibriumRecord {
  State3 point;
  EquilibriumKind kind = EquilibriumKind::Washout;
  Jacobian3 jacobian{};  // isocline-form Jacobian at `point`
};

/// Root of the competition quadratic q(x); see competition_roots().
struct CompetitionRoots {
  std::vector<double> roots;  // strictly inside (0,1), ascending
  bool linear = false;        // b2 == 0: q degenerates to a line
};

/// a2-dependent thresholds. Closed forms are evaluated directly; a2_star
/// comes from bisection on q_star and is absent when a2_plus <= hat_a2.
struct ThresholdSet {
  double check_a2 = 0.0;      // k (1 - c): transcritical at (1,0,0)
  double hat_a2 = 0.0;        // (1 - c) / c: transcritical at (0,0,c)
  double breve_a2 = 0.0;      // lower coexistence boundary at x_star
  double tilde_a2 = 0.0;      // upper coexistence boundary at x_star
  double underline_a2 = 0.0;  // below it the minimum of q lies right of x = 1
  double a2_plus = 0.0;
  double a2_minus = 0.0;
  std::optional<double> a2_star;
  std::optional<double> hopf_comp_a2;

  /// Throws Error(StarAbsent) when no two-equilibria band exists.
  double star() const;
};

/// q(x) for the given a2 and the remaining parameters of sp.
double competition_quadratic(double x, double a2, const ScaledParams& sp) noexcept;

/// Minimum point of q for the given a2.
double x_check(double a2, const ScaledParams& sp) noexcept;

/// q_star(a2) = 4 a2 b2 q(x_check(a2)).
double q_star(double a2, const ScaledParams& sp) noexcept;

/// Whether q(x_check(a2)) < 0, i.e. the minimum of q dips below zero.
bool band_check(double a2, const ScaledParams& sp) noexcept;

CompetitionRoots competition_roots(double a2, const ScaledParams& sp);

double breve_a2(const ScaledParams& sp);
double tilde_a2(const ScaledParams& sp);

std::vector<EquilibriumRecord> boundary_equilibria(const ScaledParams& sp);
std::vector<EquilibriumRecord> competition_equilibria(const ScaledParams& sp);

/// Raw (y_star, z_star) from Cramer's rule, signs unchecked. Throws
/// LocalConditionViolated when f1(x_star) <= f2(x_star).
std::array<double, 2> coexistence_coordinates(const ScaledParams& sp);

std::optional<EquilibriumRecord> coexistence_equilibrium(const ScaledParams& sp);

/// Boundary, competition and coexistence equilibria in that order.
std::vector<EquilibriumRecord> all_equilibria(const ScaledParams& sp);

/// Competition-plane Hopf point: the a2 at which (x_+, 0, F2(x_+)) changes
/// planar stability, i.e. the root of f2(x_+) F2'(x_+) - F2(x_+) on
/// (check_a2, hat_a2). Empty when no sign change exists there.
std::optional<double> hopf_comp_a2(const ScaledParams& sp);

/// Root of q_star on [hat_a2, a2_plus]; empty when a2_plus <= hat_a2.
std::optional<double> find_a2_star(const ScaledParams& sp);

ThresholdSet a2_thresholds(const ScaledParams& sp);

bool coexistence_window_nonempty(const ScaledParams& sp);

int predicted_competition_count(const ScaledParams& sp);

}  // namespace mixodyn
