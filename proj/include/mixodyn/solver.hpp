#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixodyn/equilibria.hpp"
#include "mixodyn/integrator.hpp"

namespace mixodyn {

/// Which right-hand side to integrate. Both trace the same orbits; the
/// isocline form runs on a rescaled clock.
enum class RhsForm { Saturated, Isocline };

struct SolverOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  // Keeps steps inside the stability region of the explicit pair for the
  // model's O(1) rates; without it the controller parks at the stability
  // edge and pushes stable fixed points off by ~rel_tol.
  double max_step = 1.0;
  RhsForm form = RhsForm::Saturated;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State3> states;
  IntegratorStats stats;
};

/// Throws Error(InvalidParams) for tolerances outside [1e-13, 1e-3], a
/// negative start, or a non-positive horizon.
Trajectory integrate(const ScaledParams& sp, const State3& y0, double t_end,
                     const SolverOptions& opt = {});

/// Same integration without recording; returns the terminal state.
State3 integrate_to(const ScaledParams& sp, const State3& y0, double t_end,
                    const SolverOptions& opt = {}, IntegratorStats* stats = nullptr);

/// "tau,x,y,z" with 17 significant digits, one row per accepted step.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

/// (0.5, 0.25, 0.2), already inside the simplex.
State3 default_initial_state() noexcept;

/// (x_star, 0.9 F1(x_star), 0.01): next to the autotroph-herbivore state
/// with a small mixotroph inoculum.
State3 invasion_start(const ScaledParams& sp);

enum class AttractorKind { Equilibrium, LimitCycle, Undetermined };
std::string_view to_string(AttractorKind k) noexcept;

enum class Persistence { Present, Absent, Ambiguous };
std::string_view to_string(Persistence p) noexcept;

struct AttractorOptions {
  double transient_fraction = 0.5;
  SolverOptions solver;
};

struct AttractorReport {
  AttractorKind kind = AttractorKind::Undetermined;

  // Equilibrium
  std::optional<EquilibriumKind> equilibrium_kind;
  State3 point;

  // LimitCycle
  double period = 0.0;
  std::vector<State3> section_points;  // last returns on the section
  Vec3 amplitude{};                    // max - min over the post-transient window
  std::string section;                 // "x=x_star" or "z=mid"

  double transient_discarded = 0.0;
  double budget = 0.0;
  State3 terminal;
  double terminal_rhs_norm = 0.0;
  double return_spread = 0.0;

  // Species maxima over the two halves of the post-transient window.
  Vec3 early_max{};
  Vec3 late_max{};
  std::array<Persistence, 3> persistence{Persistence::Ambiguous, Persistence::Ambiguous,
                                         Persistence::Ambiguous};
  IntegratorStats stats;
};

inline constexpr double kSettledRhsNorm = 1e-8;
inline constexpr double kCatalogMatch = 1e-6;
inline constexpr double kReturnAgreement = 1e-6;
inline constexpr std::size_t kReturnsRequired = 5;

AttractorReport detect_attractor(const ScaledParams& sp, const State3& y0, double budget,
                                 const AttractorOptions& opt = {});

struct LyapunovOptions {
  double renorm_interval = 1.0;
  double transient = 500.0;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
};

struct LyapunovEstimate {
  double exponent = 0.0;
  double renorm_interval = 0.0;
  double transient = 0.0;
  double horizon = 0.0;
  std::size_t renormalizations = 0;
};

/// Tangent-vector stretching rate along the orbit of rhs_saturated,
/// averaged over `horizon` after discarding `opt.transient`.
LyapunovEstimate largest_lyapunov_exponent(const ScaledParams& sp, const State3& y0,
                                           double horizon, const LyapunovOptions& opt = {});

}  // namespace mixodyn
