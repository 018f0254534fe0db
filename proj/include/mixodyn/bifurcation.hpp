#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mixodyn/solver.hpp"
#include "mixodyn/stability.hpp"

namespace mixodyn {

enum class PPRegime { Cycle, StableEq };
std::string_view to_string(PPRegime r) noexcept;

/// Horizontal bands of the (x_star, a2) plane. AboveStar starts at hat_a2
/// when no two-equilibria band exists.
enum class A2Band { BelowCheck, CheckToHopfComp, HopfCompToHat, HatToStar, AboveStar };
std::string_view to_string(A2Band b) noexcept;

struct RegionSignature {
  PPRegime pp_regime = PPRegime::Cycle;
  A2Band a2_band = A2Band::BelowCheck;
  bool coexist_exists = false;
  std::optional<bool> coexist_stable;
  std::optional<int> coexist_failing_criterion;  // Routh-Hurwitz index, unstable only
  bool mixo_cc_stable = false;
  int n_comp_eq = 0;
  std::optional<bool> comp_plus_planar_stable;
  std::optional<double> x_minus, x_plus;
  // x_star where the lower coexistence boundary meets a2 = check_a2; left
  // of it a predator-prey cycle that shuts out the mixotroph is row (v).
  double breve_meets_check_x = 0.0;
};

enum class Provenance { Analytic, SimulationAssisted };
std::string_view to_string(Provenance p) noexcept;

inline constexpr char kUnresolved = '?';

struct RegionCell {
  double x_star = 0.0;
  double a2 = 0.0;
  RegionSignature signature;
  char label = kUnresolved;
  bool uncertain = false;  // rows the diagram itself leaves open: p, t, v
  Provenance provenance = Provenance::Analytic;
  std::string note;

  bool resolved() const noexcept { return label != kUnresolved; }
};

/// Which species a simulation from the invasion start keeps alive.
struct SimulationEvidence {
  Persistence herbivore = Persistence::Ambiguous;
  Persistence mixotroph = Persistence::Ambiguous;
  AttractorKind kind = AttractorKind::Undetermined;
};

inline constexpr double kDefaultSimBudget = 20000.0;

/// Throws Error(OnBoundary) when a defining inequality is within the
/// marginality tolerance, Error(InvalidParams) outside the valid window.
RegionSignature region_signature(double x_star, double a2, const ScaledParams& base);

/// Whether the signature needs a simulation to pick between two rows.
bool needs_simulation(const RegionSignature& sig, double x_star) noexcept;

/// Table lookup. `sim` is required exactly when needs_simulation() holds.
RegionCell label_signature(double x_star, double a2, const RegionSignature& sig,
                           const std::optional<SimulationEvidence>& sim);

/// Full classification; simulations start from invasion_start().
RegionCell classify_region(double x_star, double a2, const ScaledParams& base,
                           double sim_budget = kDefaultSimBudget);

struct Axis {
  double lo = 0.0, hi = 0.0;
  int n = 2;
  double at(int i) const noexcept;
};

struct SweepGrid {
  Axis x_star;
  Axis a2;
};

/// Row-major cells (x_star outer, a2 inner). Worker count is capped by
/// MIXODYN_THREADS or `threads` when positive. Per-cell failures become
/// Unresolved cells with a note.
std::vector<RegionCell> sweep(const SweepGrid& grid, const ScaledParams& base,
                              double sim_budget = kDefaultSimBudget, int threads = 0);

int sweep_worker_count(int requested);

void write_sweep_csv(std::ostream& os, const std::vector<RegionCell>& cells);

struct CurveRow {
  double x_star = 0.0;
  double breve_a2 = 0.0;  // lower coexistence boundary
  double tilde_a2 = 0.0;  // upper coexistence boundary
};

struct BoundaryCurves {
  std::vector<CurveRow> rows;
  double check_a2 = 0.0;
  double hat_a2 = 0.0;
  std::optional<double> a2_star;
  std::optional<double> hopf_comp_a2;
  double x_H = -1.0;
  double tilde_max = 0.0;       // largest sampled upper-boundary value
  double tilde_argmax = 0.0;    // x_star where it occurs
};

BoundaryCurves boundary_curves(const ScaledParams& base, const Axis& x_grid);

void write_curves_csv(std::ostream& os, const BoundaryCurves& curves);

}  // namespace mixodyn
