#include "mixodyn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <ostream>

#include <fmt/format.h>

#include "mixodyn/error.hpp"

namespace mixodyn {

std::string_view to_string(AttractorKind k) noexcept {
  switch (k) {
    case AttractorKind::Equilibrium: return "equilibrium";
    case AttractorKind::LimitCycle: return "limit_cycle";
    case AttractorKind::Undetermined: return "undetermined";
  }
  return "unknown";
}

std::string_view to_string(Persistence p) noexcept {
  switch (p) {
    case Persistence::Present: return "present";
    case Persistence::Absent: return "absent";
    case Persistence::Ambiguous: return "ambiguous";
  }
  return "unknown";
}

namespace {

void check_inputs(const State3& y0, double t_end, double rel, double abs) {
  auto in_range = [](double t) { return t >= 1e-13 && t <= 1e-3; };
  if (!in_range(rel) || !in_range(abs)) {
    throw Error(ErrorKind::InvalidParams, "tolerances must lie in [1e-13, 1e-3]");
  }
  if (!(y0.x >= 0.0 && y0.y >= 0.0 && y0.z >= 0.0)) {
    throw Error(ErrorKind::InvalidParams, "initial state must be nonnegative");
  }
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorKind::InvalidParams, "integration horizon must be positive and finite");
  }
}

auto make_rhs(const ScaledParams& sp, RhsForm form) {
  return [&sp, form](const Vec3& y) {
    const State3 s = State3::from_array(y);
    return form == RhsForm::Saturated ? rhs_saturated(s, sp) : rhs_isocline(s, sp);
  };
}

IntegratorOptions to_integrator(const SolverOptions& opt) {
  IntegratorOptions io;
  io.rel_tol = opt.rel_tol;
  io.abs_tol = opt.abs_tol;
  io.max_step = opt.max_step;
  return io;
}

double max_norm(const Vec3& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

double distance(const State3& a, const State3& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

// Root of component i of the Hermite interpolant crossing `level` upward.
double locate_crossing(const StepInfo<3>& s, std::size_t i, double level) {
  double lo = s.t0, hi = s.t1;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hermite(s, i, mid) < level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct Section {
  std::size_t coord = 0;
  double level = 0.0;
  std::vector<double> times;
  std::vector<State3> points;

  void observe(const StepInfo<3>& s, double t_min) {
    if (!(s.y0[coord] < level && s.y1[coord] >= level)) return;
    const double t = locate_crossing(s, coord, level);
    if (t < t_min) return;
    if (hermite_derivative(s, coord, t) <= 0.0) return;
    times.push_back(t);
    points.push_back({hermite(s, 0, t), hermite(s, 1, t), hermite(s, 2, t)});
  }
};

std::vector<EquilibriumRecord> catalog(const ScaledParams& sp) {
  std::vector<EquilibriumRecord> out = boundary_equilibria(sp);
  for (auto& e : competition_equilibria(sp)) out.push_back(std::move(e));
  try {
    if (auto co = coexistence_equilibrium(sp)) out.push_back(std::move(*co));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::LocalConditionViolated) throw;
  }
  return out;
}

Persistence judge(double early, double late) {
  if (late < 1e-6) return Persistence::Absent;
  if (late < 1e-3 && late < 0.1 * early) return Persistence::Absent;
  if (late >= 1e-4 && late >= 0.5 * early) return Persistence::Present;
  return Persistence::Ambiguous;
}

}  // namespace

Trajectory integrate(const ScaledParams& sp, const State3& y0, double t_end,
                     const SolverOptions& opt) {
  require_saturated(sp);
  check_inputs(y0, t_end, opt.rel_tol, opt.abs_tol);
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.states.push_back(y0);
  dopri5<3>(make_rhs(sp, opt.form), y0.as_array(), 0.0, t_end, to_integrator(opt), 3,
            [&](const StepInfo<3>& s) {
              tr.times.push_back(s.t1);
              tr.states.push_back(State3::from_array(s.y1));
              return true;
            },
            &tr.stats);
  return tr;
}

State3 integrate_to(const ScaledParams& sp, const State3& y0, double t_end,
                    const SolverOptions& opt, IntegratorStats* stats) {
  require_saturated(sp);
  check_inputs(y0, t_end, opt.rel_tol, opt.abs_tol);
  const Vec3 end = dopri5<3>(make_rhs(sp, opt.form), y0.as_array(), 0.0, t_end,
                             to_integrator(opt), 3, [](const StepInfo<3>&) { return true; },
                             stats);
  return State3::from_array(end);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "tau,x,y,z\n");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const State3& s = tr.states[i];
    fmt::format_to(std::back_inserter(buf), "{:.17g},{:.17g},{:.17g},{:.17g}\n", tr.times[i],
                   s.x, s.y, s.z);
  }
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

State3 default_initial_state() noexcept { return {0.5, 0.25, 0.2}; }

State3 invasion_start(const ScaledParams& sp) {
  const StructuralValues v = eval_structural_functions(sp.x_star, sp);
  return {sp.x_star, 0.9 * v.F1, 0.01};
}

AttractorReport detect_attractor(const ScaledParams& sp, const State3& y0, double budget,
                                 const AttractorOptions& opt) {
  require_saturated(sp);
  check_inputs(y0, budget, opt.solver.rel_tol, opt.solver.abs_tol);
  if (!(opt.transient_fraction >= 0.0 && opt.transient_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidParams, "transient fraction must lie in [0, 1)");
  }

  AttractorReport rep;
  rep.budget = budget;
  rep.transient_discarded = opt.transient_fraction * budget;
  const double t_cut = rep.transient_discarded;
  const double t_half = 0.5 * (t_cut + budget);

  Section on_x{0, sp.x_star, {}, {}};
  Vec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  Vec3 state_at_cut = y0.as_array();
  bool have_cut = t_cut == 0.0;

  const auto rhs = make_rhs(sp, opt.solver.form);
  const IntegratorOptions io = to_integrator(opt.solver);
  const Vec3 end = dopri5<3>(
      rhs, y0.as_array(), 0.0, budget, io, 3,
      [&](const StepInfo<3>& s) {
        if (s.t1 < t_cut) return true;
        if (!have_cut) {
          state_at_cut = s.y1;
          have_cut = true;
        }
        on_x.observe(s, t_cut);
        Vec3& window = s.t1 < t_half ? rep.early_max : rep.late_max;
        for (std::size_t i = 0; i < 3; ++i) {
          lo[i] = std::min(lo[i], s.y1[i]);
          hi[i] = std::max(hi[i], s.y1[i]);
          window[i] = std::max(window[i], s.y1[i]);
        }
        return true;
      },
      &rep.stats);

  rep.terminal = State3::from_array(end);
  rep.terminal_rhs_norm = max_norm(rhs_saturated(rep.terminal, sp));
  for (std::size_t i = 0; i < 3; ++i) {
    rep.amplitude[i] = hi[i] >= lo[i] ? hi[i] - lo[i] : 0.0;
    rep.persistence[i] = judge(rep.early_max[i], rep.late_max[i]);
  }

  if (rep.terminal_rhs_norm <= kSettledRhsNorm) {
    for (const auto& e : catalog(sp)) {
      if (distance(e.point, rep.terminal) <= kCatalogMatch) {
        rep.kind = AttractorKind::Equilibrium;
        rep.equilibrium_kind = e.kind;
        rep.point = e.point;
        return rep;
      }
    }
  }

  Section used = std::move(on_x);
  rep.section = "x=x_star";
  if (used.times.size() <= kReturnsRequired) {
    // Fallback: upward crossings of the mid-range of z, re-run from the
    // start of the post-transient window.
    Section on_z{2, 0.5 * (lo[2] + hi[2]), {}, {}};
    if (hi[2] > lo[2] && t_cut < budget) {
      dopri5<3>(rhs, state_at_cut, t_cut, budget, io, 3, [&](const StepInfo<3>& s) {
        on_z.observe(s, t_cut);
        return true;
      });
    }
    used = std::move(on_z);
    rep.section = "z=mid";
  }

  const std::size_t n = used.times.size();
  if (n > kReturnsRequired) {
    const std::size_t first = n - kReturnsRequired;
    const State3& ref = used.points.back();
    double spread = 0.0;
    for (std::size_t i = first; i < n; ++i) spread = std::max(spread, distance(used.points[i], ref));
    rep.return_spread = spread;
    rep.section_points.assign(used.points.begin() + static_cast<std::ptrdiff_t>(first),
                              used.points.end());
    double period = 0.0;
    for (std::size_t i = first; i < n; ++i) period += used.times[i] - used.times[i - 1];
    rep.period = period / static_cast<double>(kReturnsRequired);

    // A genuine orbit needs visible amplitude; a slow spiral into an
    // equilibrium can also produce tightly clustered section points.
    if (spread <= kReturnAgreement && max_norm(rep.amplitude) > 1e-4) {
      rep.kind = AttractorKind::LimitCycle;
      return rep;
    }
  }
  rep.kind = AttractorKind::Undetermined;
  return rep;
}

LyapunovEstimate largest_lyapunov_exponent(const ScaledParams& sp, const State3& y0,
                                           double horizon, const LyapunovOptions& opt) {
  require_saturated(sp);
  check_inputs(y0, horizon, opt.rel_tol, opt.abs_tol);
  if (!(opt.renorm_interval > 0.0) || !(opt.transient >= 0.0)) {
    throw Error(ErrorKind::InvalidParams, "renormalization interval must be positive");
  }
  SolverOptions so;
  so.rel_tol = opt.rel_tol;
  so.abs_tol = opt.abs_tol;
  State3 start = y0;
  if (opt.transient > 0.0) start = integrate_to(sp, y0, opt.transient, so);

  using Arr6 = std::array<double, 6>;
  const auto tangent_rhs = [&sp](const Arr6& u) {
    const State3 s{u[0], u[1], u[2]};
    const Vec3 f = rhs_saturated(s, sp);
    const Jacobian3 j = jacobian_rhs_saturated(s, sp);
    Arr6 out{f[0], f[1], f[2], 0, 0, 0};
    for (std::size_t r = 0; r < 3; ++r) {
      out[3 + r] = j[r][0] * u[3] + j[r][1] * u[4] + j[r][2] * u[5];
    }
    return out;
  };

  IntegratorOptions io;
  io.rel_tol = opt.rel_tol;
  io.abs_tol = opt.abs_tol;
  const double w = 1.0 / std::sqrt(3.0);
  Arr6 u{start.x, start.y, start.z, w, w, w};

  LyapunovEstimate est;
  est.renorm_interval = opt.renorm_interval;
  est.transient = opt.transient;
  est.horizon = horizon;
  double log_sum = 0.0;
  double t = 0.0;
  while (t < horizon) {
    const double dt = std::min(opt.renorm_interval, horizon - t);
    u = dopri5<6>(tangent_rhs, u, 0.0, dt, io, 3, [](const StepInfo<6>&) { return true; });
    const double norm = std::sqrt(u[3] * u[3] + u[4] * u[4] + u[5] * u[5]);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorKind::IllConditioned, "tangent vector collapsed or overflowed");
    }
    log_sum += std::log(norm);
    for (std::size_t i = 3; i < 6; ++i) u[i] /= norm;
    t += dt;
    ++est.renormalizations;
  }
  est.exponent = log_sum / horizon;
  return est;
}

}  // namespace mixodyn
