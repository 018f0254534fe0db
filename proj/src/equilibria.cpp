#include "mixodyn/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mixodyn/error.hpp"

namespace mixodyn {

std::string_view to_string(EquilibriumKind kind) noexcept {
  switch (kind) {
    case EquilibriumKind::Washout: return "washout";
    case EquilibriumKind::CarryingCapacity: return "carrying_capacity";
    case EquilibriumKind::MixotrophCC: return "mixotroph_cc";
    case EquilibriumKind::PredatorPrey: return "predator_prey";
    case EquilibriumKind::CompetitionMinus: return "competition_minus";
    case EquilibriumKind::CompetitionPlus: return "competition_plus";
    case EquilibriumKind::Coexistence: return "coexistence";
  }
  return "unknown";
}

namespace {

constexpr double kEdgeExclusion = 1e-12;

EquilibriumRecord make_record(State3 p, EquilibriumKind kind, const ScaledParams& sp) {
  return {p, kind, jacobian_saturated(p, sp)};
}

// Plain bisection on a sign change; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0) == (flo < 0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double ThresholdSet::star() const {
  if (!a2_star) {
    throw Error(ErrorKind::StarAbsent, "a2_plus <= (1-c)/c: no two-equilibria band");
  }
  return *a2_star;
}

double competition_quadratic(double x, double a2, const ScaledParams& sp) noexcept {
  const double c = sp.c, k = sp.k, b2 = sp.b2;
  return k * c * (a2 - (1.0 - c) / c) + ((a2 - (k - 1.0)) * a2 - b2 * k * (1.0 - c)) * x +
         a2 * b2 * x * x;
}

double x_check(double a2, const ScaledParams& sp) noexcept {
  return (-a2 * a2 - a2 * (1.0 - sp.k) + sp.b2 * sp.k * (1.0 - sp.c)) / (2.0 * a2 * sp.b2);
}

double q_star(double a2, const ScaledParams& sp) noexcept {
  const double c = sp.c, k = sp.k, b2 = sp.b2;
  // -(a2 - a2+)(a2 - a2-) = -a2^2 - a2 (1-k) + b2 k (1-c)
  const double vertex = -a2 * a2 - a2 * (1.0 - k) + b2 * k * (1.0 - c);
  return 4.0 * a2 * b2 * k * c * (a2 - (1.0 - c) / c) - vertex * vertex;
}

bool band_check(double a2, const ScaledParams& sp) noexcept {
  return competition_quadratic(x_check(a2, sp), a2, sp) < 0.0;
}

CompetitionRoots competition_roots(double a2, const ScaledParams& sp) {
  const double qa = a2 * sp.b2;
  const double qb = (a2 - (sp.k - 1.0)) * a2 - sp.b2 * sp.k * (1.0 - sp.c);
  const double qc = sp.k * sp.c * (a2 - (1.0 - sp.c) / sp.c);

  CompetitionRoots out;
  std::vector<double> candidates;
  if (qa == 0.0) {
    out.linear = true;
    if (qb != 0.0) candidates.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      // Larger-magnitude root first, the other from the product of roots.
      const double t = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
      if (t != 0.0) {
        candidates.push_back(t / qa);
        candidates.push_back(qc / t);
      } else {
        candidates.push_back(0.0);
        candidates.push_back(0.0);
      }
    }
  }
  for (double r : candidates) {
    if (r > kEdgeExclusion && r < 1.0 - kEdgeExclusion) out.roots.push_back(r);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

double breve_a2(const ScaledParams& sp) {
  const double xs = sp.x_star;
  const double lift = 1.0 + sp.a1 / (1.0 + sp.b1 * xs);
  return (sp.k * (1.0 - xs) - sp.k * (sp.c - xs) * lift) / (xs * lift);
}

double tilde_a2(const ScaledParams& sp) {
  const double xs = sp.x_star;
  const double sat = 1.0 + sp.b2 * xs;
  const double w = (1.0 - sp.k / sat) * xs + sp.k * sp.c / sat;
  const double u = 4.0 * xs * sp.k * (1.0 - sp.c) / sat;
  // -w + sqrt(w^2 + u) rewritten as u / (w + sqrt(w^2 + u)) to avoid cancellation.
  return (u / (w + std::sqrt(w * w + u))) / (2.0 * xs / sat);
}

std::vector<EquilibriumRecord> boundary_equilibria(const ScaledParams& sp) {
  require_saturated(sp);
  const StructuralValues at_star = eval_structural_functions(sp.x_star, sp);
  return {
      make_record({0.0, 0.0, 0.0}, EquilibriumKind::Washout, sp),
      make_record({1.0, 0.0, 0.0}, EquilibriumKind::CarryingCapacity, sp),
      make_record({0.0, 0.0, sp.c}, EquilibriumKind::MixotrophCC, sp),
      make_record({sp.x_star, at_star.F1, 0.0}, EquilibriumKind::PredatorPrey, sp),
  };
}

std::vector<EquilibriumRecord> competition_equilibria(const ScaledParams& sp) {
  require_saturated(sp);
  const CompetitionRoots cr = competition_roots(sp.a2, sp);
  std::vector<EquilibriumRecord> out;
  for (std::size_t i = 0; i < cr.roots.size(); ++i) {
    const double x = cr.roots[i];
    const double z = eval_structural_functions(x, sp).F2;
    EquilibriumKind kind = EquilibriumKind::CompetitionPlus;
    if (cr.roots.size() == 2 && i == 0) kind = EquilibriumKind::CompetitionMinus;
    if (z > 0.0) out.push_back(make_record({x, 0.0, z}, kind, sp));
  }
  return out;
}

std::array<double, 2> coexistence_coordinates(const ScaledParams& sp) {
  require_saturated(sp);
  const double xs = sp.x_star;
  const double g1 = sp.a1 / (1.0 + sp.b1 * xs);
  const double g2 = sp.a2 / (1.0 + sp.b2 * xs);
  if (!(g1 > g2)) {
    throw Error(ErrorKind::LocalConditionViolated,
                "f1(x_star) <= f2(x_star): local herbivore-superiority condition fails");
  }
  // Simplified Cramer forms; the shared denominator is (k/x_star)(g1 - g2) * x_star.
  const double den = sp.k * (g1 - g2);
  const double mix = sp.k * (sp.c - xs) + sp.a2 * xs;
  const double y = (sp.k * (1.0 - xs) - (1.0 + g2) * mix) / den;
  const double z = ((1.0 + g1) * mix - sp.k * (1.0 - xs)) / den;
  return {y, z};
}

std::optional<EquilibriumRecord> coexistence_equilibrium(const ScaledParams& sp) {
  const auto [y, z] = coexistence_coordinates(sp);
  if (!(y > 0.0 && z > 0.0)) return std::nullopt;
  return make_record({sp.x_star, y, z}, EquilibriumKind::Coexistence, sp);
}

std::vector<EquilibriumRecord> all_equilibria(const ScaledParams& sp) {
  std::vector<EquilibriumRecord> out = boundary_equilibria(sp);
  for (auto& e : competition_equilibria(sp)) out.push_back(std::move(e));
  if (auto co = coexistence_equilibrium(sp)) out.push_back(std::move(*co));
  return out;
}

namespace {

// Planar trace of the competition corner block at x_+ for a given a2,
// NaN when no x_+ exists.
double comp_plus_trace(double a2, const ScaledParams& base) {
  ScaledParams sp = base;
  sp.a2 = a2;
  const CompetitionRoots cr = competition_roots(a2, sp);
  if (cr.roots.empty()) return std::nan("");
  const double xp = cr.roots.back();
  const StructuralValues v = eval_structural_functions(xp, sp);
  const StructuralDerivatives d = eval_structural_derivatives(xp, sp);
  return v.f2 * d.dF2 - v.F2;
}

}  // namespace

std::optional<double> hopf_comp_a2(const ScaledParams& sp) {
  require_saturated(sp);
  const double lo = sp.k * (1.0 - sp.c);
  const double hi = (1.0 - sp.c) / sp.c;
  if (!(hi > lo)) return std::nullopt;
  // Scan from the top of the one-equilibrium band downwards for the first
  // stable/unstable switch, then refine by bisection.
  constexpr int kSamples = 2000;
  const double step = (hi - lo) / kSamples;
  double upper = hi - 0.5 * step;
  double f_upper = comp_plus_trace(upper, sp);
  for (int i = 1; i < kSamples; ++i) {
    const double lower = hi - (i + 0.5) * step;
    const double f_lower = comp_plus_trace(lower, sp);
    if (std::isfinite(f_lower) && std::isfinite(f_upper) && (f_lower < 0) != (f_upper < 0)) {
      return bisect([&](double a) { return comp_plus_trace(a, sp); }, lower, upper, 1e-10);
    }
    upper = lower;
    f_upper = f_lower;
  }
  return std::nullopt;
}

std::optional<double> find_a2_star(const ScaledParams& sp) {
  const double hat = (1.0 - sp.c) / sp.c;
  const double plus =
      (-(1.0 - sp.k) + std::sqrt((1.0 - sp.k) * (1.0 - sp.k) + 4.0 * sp.b2 * sp.k * (1.0 - sp.c))) /
      2.0;
  if (!(sp.b2 > 0.0 && plus > hat)) return std::nullopt;
  return bisect([&](double a) { return q_star(a, sp); }, hat, plus, 1e-12);
}

ThresholdSet a2_thresholds(const ScaledParams& sp) {
  require_saturated(sp);
  const double c = sp.c, k = sp.k, b2 = sp.b2;
  ThresholdSet t;
  t.check_a2 = k * (1.0 - c);
  t.hat_a2 = (1.0 - c) / c;
  t.breve_a2 = breve_a2(sp);
  t.tilde_a2 = tilde_a2(sp);
  const double root = std::sqrt((1.0 - k) * (1.0 - k) + 4.0 * b2 * k * (1.0 - c));
  t.a2_plus = (-(1.0 - k) + root) / 2.0;
  t.a2_minus = (-(1.0 - k) - root) / 2.0;
  const double shifted = 1.0 - k + b2;
  t.underline_a2 = (-shifted + std::sqrt(shifted * shifted + 4.0 * b2 * k * (1.0 - c))) / 2.0;
  t.a2_star = find_a2_star(sp);
  t.hopf_comp_a2 = hopf_comp_a2(sp);
  return t;
}

bool coexistence_window_nonempty(const ScaledParams& sp) {
  require_saturated(sp);
  const double xs = sp.x_star;
  const double g1 = sp.a1 / (1.0 + sp.b1 * xs);
  const double lift = 1.0 + g1;
  const double s = ((1.0 - xs) - lift * (sp.c - xs)) / ((1.0 + sp.b2 * xs) * lift);
  return sp.k * s < xs * g1;
}

int predicted_competition_count(const ScaledParams& sp) {
  require_saturated(sp);
  const double check = sp.k * (1.0 - sp.c);
  const double hat = (1.0 - sp.c) / sp.c;
  if (sp.a2 > check && sp.a2 < hat) return 1;
  if (sp.a2 > hat) {
    const auto star = find_a2_star(sp);
    if (star && sp.a2 < *star) return 2;
  }
  return 0;
}

}  // namespace mixodyn
