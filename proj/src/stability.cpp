#include "mixodyn/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mixodyn/error.hpp"

namespace mixodyn {

std::string_view to_string(OverallStability s) noexcept {
  switch (s) {
    case OverallStability::Stable: return "stable";
    case OverallStability::Saddle: return "saddle";
    case OverallStability::Unstable: return "unstable";
    case OverallStability::HopfBoundary: return "hopf_boundary";
  }
  return "unknown";
}

std::string_view to_string(Regime r) noexcept {
  switch (r) {
    case Regime::UniqueLimitCycle: return "unique_limit_cycle";
    case Regime::GloballyStableEq: return "globally_stable_eq";
    case Regime::ConvergesToEquilibrium: return "converges_to_equilibrium";
    case Regime::CyclesPossible: return "cycles_possible";
  }
  return "unknown";
}

std::string_view to_string(ConvergenceReason r) noexcept {
  switch (r) {
    case ConvergenceReason::GDecreasing: return "G_decreasing";
    case ConvergenceReason::F2Decreasing: return "F2_decreasing";
    case ConvergenceReason::NoInteriorEquilibria: return "no_interior_equilibria";
  }
  return "unknown";
}

std::optional<double> PlaneRegime::witness(std::string_view name) const {
  for (const auto& [key, value] : witnesses) {
    if (key == name) return value;
  }
  return std::nullopt;
}

double frobenius_norm(const Jacobian3& a) noexcept {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return std::sqrt(s);
}

RHVerdict routh_hurwitz(const Jacobian3& a) {
  RHVerdict v;
  v.trace = a[0][0] + a[1][1] + a[2][2];
  const double m11 = a[1][1] * a[2][2] - a[1][2] * a[2][1];
  const double m22 = a[0][0] * a[2][2] - a[0][2] * a[2][0];
  const double m33 = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  v.minor_sum = m11 + m22 + m33;
  v.det = a[0][0] * m11 - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
          a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  v.third = v.trace * v.minor_sum - v.det;
  v.trace_neg = v.trace < 0.0;
  v.det_neg = v.det < 0.0;
  v.third_neg = v.third < 0.0;
  v.stable = v.trace_neg && v.det_neg && v.third_neg;
  if (!v.trace_neg) {
    v.failing_criterion = 1;
  } else if (!v.det_neg) {
    v.failing_criterion = 2;
  } else if (!v.third_neg) {
    v.failing_criterion = 3;
  }

  const double n = frobenius_norm(a);
  const double n3 = n * n * n;
  v.marginal = n3 == 0.0 || std::abs(v.det) <= kMarginalTolerance * n3 ||
               std::abs(v.third) <= kMarginalTolerance * n3;
  return v;
}

double criterion_margin(const RHVerdict& v, const Jacobian3& a) noexcept {
  const double n = frobenius_norm(a);
  if (n == 0.0) return 0.0;
  const double n3 = n * n * n;
  return std::min({std::abs(v.trace) / n, std::abs(v.det) / n3, std::abs(v.third) / n3});
}

Eigenvalues3 eigenvalue_oracle(const Jacobian3& a) {
  using cd = std::complex<double>;
  const RHVerdict rh = routh_hurwitz(a);
  // lambda^3 + p2 lambda^2 + p1 lambda + p0
  const double p2 = -rh.trace;
  const double p1 = rh.minor_sum;
  const double p0 = -rh.det;
  auto poly = [&](cd l) { return ((l + p2) * l + p1) * l + p0; };
  auto dpoly = [&](cd l) { return (3.0 * l + 2.0 * p2) * l + p1; };

  const double shift = p2 / 3.0;
  const double p = p1 - p2 * p2 / 3.0;
  const double q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
  const double disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);

  Eigenvalues3 roots;
  if (disc < 0.0) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int i = 0; i < 3; ++i) {
      roots[i] = cd(r * std::cos(phi - 2.0 * std::numbers::pi * i / 3.0) - shift, 0.0);
    }
  } else {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 - (q >= 0 ? sq : -sq));
    const double v = u == 0.0 ? 0.0 : -p / (3.0 * u);
    const double re = -(u + v) / 2.0 - shift;
    const double im = std::sqrt(3.0) / 2.0 * (u - v);
    roots = {cd(u + v - shift, 0.0), cd(re, im), cd(re, -im)};
  }

  const double n = frobenius_norm(a);
  const double bound = 1e-8 * (1.0 + n * n * n);
  for (auto& l : roots) {
    const cd d = dpoly(l);
    if (std::abs(d) > 0.0) {
      const cd polished = l - poly(l) / d;
      if (std::abs(poly(polished)) <= std::abs(poly(l))) l = polished;
    }
    if (!(std::abs(poly(l)) <= bound)) {
      throw Error(ErrorKind::IllConditioned, "characteristic polynomial residual too large");
    }
  }
  return roots;
}

namespace {

struct SignCount {
  int positive = 0;
  int negative = 0;
  bool marginal = false;
  bool hopf = false;
};

// Contribution of a 2x2 block with the given trace and determinant.
void count_block(SignCount& s, double trace, double det, double scale) {
  const double tol = kMarginalTolerance * std::max(scale, 1e-300);
  if (std::abs(det) <= tol * scale) {
    s.marginal = true;
  }
  if (det < 0.0) {
    ++s.positive;
    ++s.negative;
  } else if (std::abs(trace) <= tol) {
    s.hopf = true;
    s.marginal = true;
  } else if (trace < 0.0) {
    s.negative += 2;
  } else {
    s.positive += 2;
  }
}

void count_scalar(SignCount& s, double lambda, double scale) {
  if (std::abs(lambda) <= kMarginalTolerance * std::max(scale, 1e-300)) s.marginal = true;
  if (lambda < 0.0) {
    ++s.negative;
  } else {
    ++s.positive;
  }
}

OverallStability overall_from(const SignCount& s) {
  if (s.hopf) return OverallStability::HopfBoundary;
  if (s.positive == 0) return OverallStability::Stable;
  if (s.negative == 0) return OverallStability::Unstable;
  return OverallStability::Saddle;
}

PlanarVerdict block_verdict(double trace, double det, double scale) {
  PlanarVerdict p;
  p.trace = trace;
  p.det = det;
  p.stable = det > 0.0 && trace < 0.0;
  const double tol = kMarginalTolerance * std::max(scale, 1e-300);
  p.marginal = std::abs(det) <= tol * scale || (det > 0.0 && std::abs(trace) <= tol);
  return p;
}

// 2x2 sub-block on rows/columns (i, j).
std::pair<double, double> sub_block(const Jacobian3& a, int i, int j) {
  return {a[i][i] + a[j][j], a[i][i] * a[j][j] - a[i][j] * a[j][i]};
}

double residual_norm(const State3& p, const ScaledParams& sp) {
  const Vec3 r = rhs_saturated(p, sp);
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

}  // namespace

PlanarVerdict competition_planar_verdict(double x, const ScaledParams& sp) {
  const StructuralValues v = eval_structural_functions(x, sp);
  const StructuralDerivatives d = eval_structural_derivatives(x, sp);
  const double trace = v.f2 * d.dF2 - v.G;
  const double det = v.f2 * v.G * (d.dG - d.dF2);
  const double scale = std::max({std::abs(v.f2 * d.dF2), std::abs(v.G), std::abs(v.f2),
                                 std::abs(v.G * d.dG), 1e-300});
  return block_verdict(trace, det, scale);
}

EquilibriumClassification classify_equilibrium(const EquilibriumRecord& e,
                                               const ScaledParams& sp) {
  require_saturated(sp);
  if (residual_norm(e.point, sp) > 1e-6) {
    throw Error(ErrorKind::NotAnEquilibrium, "rhs residual exceeds 1e-6 at the given point");
  }
  const Jacobian3& j = e.jacobian;
  const double scale = std::max(frobenius_norm(j), 1e-300);

  EquilibriumClassification out;
  out.kind = e.kind;
  SignCount signs;

  switch (e.kind) {
    case EquilibriumKind::Washout:
    case EquilibriumKind::CarryingCapacity:
    case EquilibriumKind::PredatorPrey: {
      // Invariant xy-plane block; the z row decouples, leaving G - y.
      const auto [tr, det] = sub_block(j, 0, 1);
      out.planar = block_verdict(tr, det, scale);
      out.transversal_eigenvalue = j[2][2];
      count_block(signs, tr, det, scale);
      count_scalar(signs, j[2][2], scale);
      break;
    }
    case EquilibriumKind::MixotrophCC:
    case EquilibriumKind::CompetitionMinus:
    case EquilibriumKind::CompetitionPlus: {
      // Invariant xz-plane block; the y row decouples, leaving psi(x).
      if (e.kind == EquilibriumKind::MixotrophCC) {
        const auto [tr, det] = sub_block(j, 0, 2);
        out.planar = block_verdict(tr, det, scale);
      } else {
        out.planar = competition_planar_verdict(e.point.x, sp);
      }
      out.transversal_eigenvalue = j[1][1];
      count_block(signs, out.planar.trace, out.planar.det, scale);
      count_scalar(signs, j[1][1], scale);
      break;
    }
    case EquilibriumKind::Coexistence: {
      const RHVerdict rh = routh_hurwitz(j);
      out.rh = rh;
      out.planar = {rh.stable, rh.trace, rh.det, rh.marginal};
      if (rh.stable) {
        signs.negative = 3;
      } else if (rh.marginal && std::abs(rh.third) <= kMarginalTolerance * scale * scale * scale) {
        signs.hopf = true;
      } else {
        // det < 0 here, so the only way out of stability is a complex pair
        // crossing; the resulting saddle-focus is reported as Unstable.
        signs.positive = 3;
      }
      signs.marginal = rh.marginal;
      break;
    }
  }
  out.marginal = signs.marginal;
  out.overall = overall_from(signs);
  return out;
}

SufficientStability coexistence_sufficient_stability(const ScaledParams& sp) {
  if (!coexistence_equilibrium(sp)) {
    throw Error(ErrorKind::NoCoexistence, "no coexistence equilibrium at these parameters");
  }
  const StructuralValues v = eval_structural_functions(sp.x_star, sp);
  const StructuralDerivatives d = eval_structural_derivatives(sp.x_star, sp);
  const bool crit_i = d.dF1 < 0.0;
  const bool crit_ii = d.dG > 0.0;
  const bool crit_iii = v.f1 * d.df2 - d.df1 * v.f2 > 0.0;
  return crit_i && crit_ii && crit_iii ? SufficientStability::StableBySufficientCriteria
                                       : SufficientStability::Inconclusive;
}

PlaneRegime predator_prey_regime(const ScaledParams& sp) {
  require_saturated(sp);
  PlaneRegime r;
  r.plane = Plane::PredatorPrey;
  const double x_h = f1_hump(sp.a1, sp.b1);
  if (x_h > 0.0) {
    r.witnesses.emplace_back("x_H", x_h);
    r.regime = sp.x_star < x_h ? Regime::UniqueLimitCycle : Regime::GloballyStableEq;
  } else {
    r.regime = Regime::GloballyStableEq;
  }
  return r;
}

PlaneRegime competition_plane_regime(const ScaledParams& sp) {
  require_saturated(sp);
  PlaneRegime r;
  r.plane = Plane::Competition;

  const auto comp = competition_equilibria(sp);
  for (const auto& e : comp) {
    if (e.kind == EquilibriumKind::CompetitionPlus) {
      const PlanarVerdict pv = competition_planar_verdict(e.point.x, sp);
      r.comp_plus_planar_stable = pv.trace < 0.0;
      r.witnesses.emplace_back("x_plus", e.point.x);
      r.witnesses.emplace_back("comp_plus_trace", pv.trace);
    }
  }

  const double f2_hump = f1_hump(sp.a2, sp.b2);  // same formula with (a2, b2)
  if (f2_hump > 0.0) r.witnesses.emplace_back("F2_critical_point", f2_hump);

  if (sp.a2 < sp.k) {
    r.reason = ConvergenceReason::GDecreasing;
  } else if (f2_hump < 0.0 || f2_hump >= 1.0) {
    r.reason = ConvergenceReason::F2Decreasing;
  } else if (comp.empty()) {
    r.reason = ConvergenceReason::NoInteriorEquilibria;
  }
  r.regime = r.reason ? Regime::ConvergesToEquilibrium : Regime::CyclesPossible;
  return r;
}

}  // namespace mixodyn
