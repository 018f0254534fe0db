#include "mixodyn/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "mixodyn/error.hpp"

namespace mixodyn {

std::string_view to_string(PPRegime r) noexcept {
  return r == PPRegime::Cycle ? "cycle" : "stable_eq";
}

std::string_view to_string(A2Band b) noexcept {
  switch (b) {
    case A2Band::BelowCheck: return "below_check";
    case A2Band::CheckToHopfComp: return "check_to_hopf_comp";
    case A2Band::HopfCompToHat: return "hopf_comp_to_hat";
    case A2Band::HatToStar: return "hat_to_star";
    case A2Band::AboveStar: return "above_star";
  }
  return "unknown";
}

std::string_view to_string(Provenance p) noexcept {
  return p == Provenance::Analytic ? "analytic" : "simulation";
}

namespace {

bool near(double a, double b) {
  return std::abs(a - b) <= kMarginalTolerance * std::max(1.0, std::abs(b));
}

void boundary_check(bool hit, const char* what) {
  if (hit) throw Error(ErrorKind::OnBoundary, what);
}

std::string fmt_real(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

RegionSignature region_signature(double x_star, double a2, const ScaledParams& base) {
  require_saturated(base);
  if (!(x_star > 0.0 && x_star < 1.0) || !(a2 > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "need 0 < x_star < 1 and a2 > 0");
  }
  const ScaledParams sp =
      make_saturated(base.c, base.k, x_star, base.a1, a2, base.b1, base.b2);
  if (!(a2 < mixotroph_efficiency_bound(sp))) {
    throw Error(ErrorKind::InvalidParams, "a2 exceeds a1 (1 + b2 x_star) / (1 + b1 x_star)");
  }

  RegionSignature sig;

  const double x_h = f1_hump(sp.a1, sp.b1);
  if (x_h > 0.0) boundary_check(near(x_star, x_h), "x_star on the predator-prey Hopf line");
  sig.pp_regime = (x_h > 0.0 && x_star < x_h) ? PPRegime::Cycle : PPRegime::StableEq;

  const double check = sp.k * (1.0 - sp.c);
  const double hat = (1.0 - sp.c) / sp.c;
  const auto star = find_a2_star(sp);
  const auto hopf = hopf_comp_a2(sp);
  boundary_check(near(a2, check), "a2 on the check threshold");
  boundary_check(near(a2, hat), "a2 on the hat threshold");
  if (star) boundary_check(near(a2, *star), "a2 on the a2_star threshold");
  if (hopf) boundary_check(near(a2, *hopf), "a2 on the competition Hopf threshold");

  sig.mixo_cc_stable = a2 > hat;
  sig.breve_meets_check_x = (sp.a1 - hat) / (sp.b1 * hat);

  const auto comp = competition_equilibria(sp);
  sig.n_comp_eq = static_cast<int>(comp.size());
  for (const auto& e : comp) {
    if (e.kind == EquilibriumKind::CompetitionMinus) {
      sig.x_minus = e.point.x;
    } else {
      sig.x_plus = e.point.x;
      sig.comp_plus_planar_stable = competition_planar_verdict(e.point.x, sp).trace < 0.0;
    }
    boundary_check(near(x_star, e.point.x), "x_star coincides with a competition equilibrium");
  }

  if (a2 < check) {
    sig.a2_band = A2Band::BelowCheck;
  } else if (a2 < hat) {
    const bool below_hopf =
        hopf ? a2 < *hopf : sig.comp_plus_planar_stable.value_or(true);
    sig.a2_band = below_hopf ? A2Band::CheckToHopfComp : A2Band::HopfCompToHat;
  } else if (star && a2 < *star) {
    sig.a2_band = A2Band::HatToStar;
  } else {
    sig.a2_band = A2Band::AboveStar;
  }

  const auto yz = coexistence_coordinates(sp);
  boundary_check(std::abs(yz[0]) <= kMarginalTolerance || std::abs(yz[1]) <= kMarginalTolerance,
                 "coexistence equilibrium on a coordinate plane");
  if (yz[0] > 0.0 && yz[1] > 0.0) {
    sig.coexist_exists = true;
    const RHVerdict rh = routh_hurwitz(jacobian_saturated({x_star, yz[0], yz[1]}, sp));
    boundary_check(rh.marginal, "coexistence equilibrium marginally stable");
    sig.coexist_stable = rh.stable;
    if (!rh.stable) sig.coexist_failing_criterion = rh.failing_criterion;
  }
  return sig;
}

bool needs_simulation(const RegionSignature& s, double x_star) noexcept {
  if (s.pp_regime != PPRegime::Cycle) return false;
  const bool unstable_coexist = s.coexist_exists && s.coexist_stable == false;
  switch (s.a2_band) {
    case A2Band::HopfCompToHat:
      return unstable_coexist;
    case A2Band::CheckToHopfComp:
      return unstable_coexist || (!s.coexist_exists && s.x_plus && x_star < *s.x_plus);
    case A2Band::BelowCheck:
      return unstable_coexist || !s.coexist_exists;
    default:
      return false;
  }
}

RegionCell label_signature(double x_star, double a2, const RegionSignature& s,
                           const std::optional<SimulationEvidence>& sim) {
  RegionCell cell;
  cell.x_star = x_star;
  cell.a2 = a2;
  cell.signature = s;

  const bool cycle = s.pp_regime == PPRegime::Cycle;
  const bool coexist = s.coexist_exists;
  const bool stable_co = coexist && s.coexist_stable == true;
  const bool unstable_co = coexist && s.coexist_stable == false;
  const bool left_of_minus = s.x_minus && x_star < *s.x_minus;
  const bool right_of_plus = s.x_plus && x_star > *s.x_plus;
  const bool left_of_plus = s.x_plus && x_star < *s.x_plus;

  auto set = [&](char label) {
    cell.label = label;
    cell.uncertain = label == 'p' || label == 't' || label == 'v';
  };

  const bool use_sim = needs_simulation(s, x_star);
  if (use_sim) {
    cell.provenance = Provenance::SimulationAssisted;
    if (!sim) {
      cell.note = "simulation evidence missing";
      return cell;
    }
  }
  const bool y_on = sim && sim->herbivore == Persistence::Present;
  const bool y_off = sim && sim->herbivore == Persistence::Absent;
  const bool z_on = sim && sim->mixotroph == Persistence::Present;
  const bool z_off = sim && sim->mixotroph == Persistence::Absent;

  switch (s.a2_band) {
    case A2Band::AboveStar:
      if (!coexist) set(cycle ? 'a' : 'b');
      break;
    case A2Band::HatToStar:
      if (s.n_comp_eq != 2) break;
      if (cycle && unstable_co) {
        set('d');
      } else if (cycle && !coexist && left_of_minus) {
        set('c');
      } else if (!coexist && right_of_plus) {
        set(cycle ? 'e' : 'f');
      }
      break;
    case A2Band::HopfCompToHat:
      if (cycle && unstable_co) {
        if (y_on && z_on) set('g');
        else if (y_off && z_on) set('h');
      } else if (!coexist) {
        set(cycle ? 'i' : 'j');
      }
      break;
    case A2Band::CheckToHopfComp:
      if (stable_co) {
        set(cycle ? 'm' : 'n');
      } else if (cycle && unstable_co) {
        if (y_on && z_on) set('k');
        else if (y_on && z_off) set('p');
      } else if (!coexist && right_of_plus) {
        set(cycle ? 'l' : 'o');
      } else if (!coexist && left_of_plus) {
        if (!cycle) set('s');
        else if (y_on && z_on) set('q');
        else if (y_on && z_off) set('r');
      }
      break;
    case A2Band::BelowCheck:
      if (cycle && unstable_co) {
        if (y_on && z_on) set('u');
        else if (y_on && z_off) set('t');
      } else if (!coexist) {
        if (!cycle) set('y');
        else if (y_on && z_on) set('w');
        else if (y_on && z_off) set(x_star < s.breve_meets_check_x ? 'v' : 'x');
      }
      break;
  }

  if (!cell.resolved()) {
    cell.note = use_sim ? "simulation outcome matches no row" : "signature matches no row";
  }
  return cell;
}

RegionCell classify_region(double x_star, double a2, const ScaledParams& base,
                           double sim_budget) {
  const RegionSignature sig = region_signature(x_star, a2, base);
  std::optional<SimulationEvidence> sim;
  if (needs_simulation(sig, x_star)) {
    const ScaledParams sp =
        make_saturated(base.c, base.k, x_star, base.a1, a2, base.b1, base.b2);
    const AttractorReport rep = detect_attractor(sp, invasion_start(sp), sim_budget);
    sim = SimulationEvidence{rep.persistence[1], rep.persistence[2], rep.kind};
  }
  return label_signature(x_star, a2, sig, sim);
}

double Axis::at(int i) const noexcept {
  if (n <= 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

int sweep_worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("MIXODYN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

std::vector<RegionCell> sweep(const SweepGrid& grid, const ScaledParams& base, double sim_budget,
                              int threads) {
  if (grid.x_star.n < 2 || grid.a2.n < 2) {
    throw Error(ErrorKind::InvalidParams, "sweep needs at least two points per axis");
  }
  require_saturated(base);
  const std::size_t total = static_cast<std::size_t>(grid.x_star.n) * grid.a2.n;
  std::vector<RegionCell> cells(total);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t idx = next++; idx < total; idx = next++) {
      const int i = static_cast<int>(idx / grid.a2.n);
      const int j = static_cast<int>(idx % grid.a2.n);
      const double x = grid.x_star.at(i);
      const double a = grid.a2.at(j);
      try {
        cells[idx] = classify_region(x, a, base, sim_budget);
      } catch (const Error& e) {
        RegionCell c;
        c.x_star = x;
        c.a2 = a;
        c.note = e.what();
        cells[idx] = std::move(c);
      }
    }
  };

  const int workers = std::min<int>(sweep_worker_count(threads), static_cast<int>(total));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return cells;
}

void write_sweep_csv(std::ostream& os, const std::vector<RegionCell>& cells) {
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out,
                 "x_star,a2,region,provenance,pp_regime,n_comp_eq,comp_plus_planar_stable,"
                 "coexist_exists,coexist_stable,mixo_cc_stable\n");
  auto opt_bool = [](const std::optional<bool>& b) -> std::string_view {
    if (!b) return "";
    return *b ? "1" : "0";
  };
  for (const auto& c : cells) {
    const RegionSignature& s = c.signature;
    fmt::format_to(out, "{:.17g},{:.17g},{},{},{},{},{},{},{},{}\n", c.x_star, c.a2, c.label,
                   to_string(c.provenance), to_string(s.pp_regime), s.n_comp_eq,
                   opt_bool(s.comp_plus_planar_stable), s.coexist_exists ? 1 : 0,
                   opt_bool(s.coexist_stable), s.mixo_cc_stable ? 1 : 0);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

BoundaryCurves boundary_curves(const ScaledParams& base, const Axis& x_grid) {
  require_saturated(base);
  BoundaryCurves out;
  const ThresholdSet t = a2_thresholds(base);
  out.check_a2 = t.check_a2;
  out.hat_a2 = t.hat_a2;
  out.a2_star = t.a2_star;
  out.hopf_comp_a2 = t.hopf_comp_a2;
  out.x_H = f1_hump(base.a1, base.b1);
  out.tilde_max = -1e300;
  for (int i = 0; i < x_grid.n; ++i) {
    ScaledParams sp = base;
    sp.x_star = x_grid.at(i);
    CurveRow row{sp.x_star, breve_a2(sp), tilde_a2(sp)};
    if (row.tilde_a2 > out.tilde_max) {
      out.tilde_max = row.tilde_a2;
      out.tilde_argmax = row.x_star;
    }
    out.rows.push_back(row);
  }
  return out;
}

void write_curves_csv(std::ostream& os, const BoundaryCurves& c) {
  fmt::memory_buffer buf;
  auto out = std::back_inserter(buf);
  fmt::format_to(out, "x_star,breve_a2,tilde_a2,check_a2,hat_a2,a2_star,hopf_comp_a2,x_H\n");
  const std::string star = c.a2_star ? fmt_real(*c.a2_star) : "";
  const std::string hopf = c.hopf_comp_a2 ? fmt_real(*c.hopf_comp_a2) : "";
  for (const auto& r : c.rows) {
    fmt::format_to(out, "{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{:.17g}\n", r.x_star,
                   r.breve_a2, r.tilde_a2, c.check_a2, c.hat_a2, star, hopf, c.x_H);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace mixodyn
