#include "mixodyn/model.hpp"

#include <cmath>
#include <sstream>

#include "mixodyn/error.hpp"

namespace mixodyn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::ScaleDegenerate: return "ScaleDegenerate";
    case ErrorKind::TradeOffViolated: return "TradeOffViolated";
    case ErrorKind::NotSaturated: return "NotSaturated";
    case ErrorKind::ManifoldViolation: return "ManifoldViolation";
    case ErrorKind::DenominatorVanishes: return "DenominatorVanishes";
    case ErrorKind::LocalConditionViolated: return "LocalConditionViolated";
    case ErrorKind::StarAbsent: return "StarAbsent";
    case ErrorKind::IllConditioned: return "IllConditioned";
    case ErrorKind::NotAnEquilibrium: return "NotAnEquilibrium";
    case ErrorKind::NoCoexistence: return "NoCoexistence";
    case ErrorKind::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorKind::NegativeStateBeyondTolerance: return "NegativeStateBeyondTolerance";
    case ErrorKind::OnBoundary: return "OnBoundary";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Usage: return "Usage";
  }
  return "Unknown";
}

namespace {

bool finite_all(std::initializer_list<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace

void check_invariants(const ChemostatParams& p) {
  require(finite_all({p.C, p.D, p.A1, p.A2, p.A3, p.A4, p.B1, p.B2, p.B3, p.B4}),
          ErrorKind::InvalidParams, "non-finite chemostat parameter");
  require(p.C > 0 && p.D > 0, ErrorKind::InvalidParams, "C and D must be positive");
  require(p.A1 > 0 && p.A2 > 0 && p.A3 > 0 && p.A4 > 0, ErrorKind::InvalidParams,
          "search rates A1..A4 must be positive");
  require(p.B1 >= 0 && p.B2 >= 0 && p.B3 >= 0 && p.B4 >= 0, ErrorKind::InvalidParams,
          "handling times B1..B4 must be nonnegative");
  const double bs[4] = {p.B1, p.B2, p.B3, p.B4};
  for (int i = 0; i < 4; ++i) {
    if (!(1.0 - p.D * bs[i] > 0.0)) {
      std::ostringstream os;
      os << "1 - D*B" << (i + 1) << " must be positive";
      throw Error(ErrorKind::InvalidParams, os.str());
    }
  }
}

void check_invariants(const ScaledParams& sp) {
  require(finite_all({sp.c, sp.k, sp.x_star, sp.a1, sp.a2, sp.b1, sp.b2, sp.gamma1,
                      sp.kappa1, sp.gamma2, sp.kappa2, sp.m}),
          ErrorKind::InvalidParams, "non-finite scaled parameter");
  require(sp.c > 0 && sp.c < 1, ErrorKind::InvalidParams, "c must lie in (0,1)");
  require(sp.k > 0 && sp.k < 1, ErrorKind::InvalidParams, "k must lie in (0,1)");
  require(sp.x_star > 0 && sp.x_star < 1, ErrorKind::InvalidParams,
          "x_star must lie in (0,1)");
  require(sp.a1 > 0 && sp.a2 > 0, ErrorKind::InvalidParams, "a1 and a2 must be positive");
  require(sp.b1 >= 0 && sp.b2 >= 0, ErrorKind::InvalidParams,
          "b1 and b2 must be nonnegative");
  require(sp.gamma1 >= 0 && sp.kappa1 >= 0 && sp.gamma2 >= 0 && sp.kappa2 >= 0,
          ErrorKind::InvalidParams, "gamma/kappa must be nonnegative");
  if (sp.kappa1 > 0 && sp.kappa2 > 0) {
    const double lhs = sp.gamma2 * sp.kappa1;
    const double rhs = sp.gamma1 * sp.kappa2;
    require(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)),
            ErrorKind::InvalidParams, "gamma2/kappa2 must equal gamma1/kappa1");
  }
  const double m_expected = sp.a1 / (1.0 + sp.b1 * sp.x_star);
  require(sp.m > 0 && std::abs(sp.m - m_expected) <= 1e-12 * m_expected,
          ErrorKind::InvalidParams, "m must equal a1/(1+b1*x_star)");
}

void require_saturated(const ScaledParams& sp) {
  require(sp.saturated(), ErrorKind::NotSaturated,
          "analysis requires gamma1 = kappa1 = gamma2 = kappa2 = 0");
}

ScaledParams make_saturated(double c, double k, double x_star, double a1, double a2,
                            double b1, double b2) {
  ScaledParams sp;
  sp.c = c;
  sp.k = k;
  sp.x_star = x_star;
  sp.a1 = a1;
  sp.a2 = a2;
  sp.b1 = b1;
  sp.b2 = b2;
  sp.m = a1 / (1.0 + b1 * x_star);
  check_invariants(sp);
  return sp;
}

ValidationReport validate_trade_offs(const ChemostatParams& p) {
  check_invariants(p);
  ValidationReport r;

  const double a_lhs = p.A1 - p.A2;
  const double a_rhs = p.D * (p.A1 * p.B1 - p.A2 * p.B2);
  r.condition_A = a_lhs > a_rhs;
  if (!r.condition_A) {
    r.messages.push_back(a_lhs == a_rhs
                             ? "condition (A) on boundary: A1 - A2 = D*(A1*B1 - A2*B2)"
                             : "condition (A) violated: A1 - A2 > D*(A1*B1 - A2*B2) fails");
  }

  const double g_lhs = p.A3 - p.A4;
  const double g_rhs = p.A3 * p.A4 * p.C * (p.B3 - p.B4);
  r.condition_B_global = (p.A3 > p.A4) && (g_lhs > g_rhs);
  if (!r.condition_B_global) {
    r.messages.push_back(
        "condition (B, global) not satisfied: A3 > A4 and A3 - A4 > A3*A4*C*(B3 - B4) "
        "(informational)");
  }

  const double l_lhs = p.A3 - p.A4;
  const double l_rhs = p.D * (p.A3 * p.B3 - p.A4 * p.B4);
  r.condition_B_local = l_lhs > l_rhs;
  if (!r.condition_B_local) {
    r.messages.push_back(l_lhs == l_rhs
                             ? "condition (B, local) on boundary: A3 - A4 = D*(A3*B3 - A4*B4)"
                             : "condition (B, local) violated: A3 - A4 > D*(A3*B3 - A4*B4) "
                               "fails");
  }
  return r;
}

ScaledParams nondimensionalize(const ChemostatParams& p) {
  const ValidationReport report = validate_trade_offs(p);
  if (!report.admissible()) {
    std::string what = "trade-off conditions fail";
    for (const auto& msg : report.messages) what += "; " + msg;
    throw Error(ErrorKind::TradeOffViolated, what);
  }

  const double e1 = 1.0 - p.D * p.B1;
  const double e2 = 1.0 - p.D * p.B2;
  const double e3 = 1.0 - p.D * p.B3;
  const double e4 = 1.0 - p.D * p.B4;
  const double growth = p.A1 * p.C * e1 - p.D;
  if (!(growth > 0.0)) {
    throw Error(ErrorKind::ScaleDegenerate,
                "A1*C*(1-D*B1) - D must be positive (autotroph cannot persist)");
  }
  const double base = p.A1 * e1;

  ScaledParams sp;
  sp.kappa1 = p.B1 * growth / e1;
  sp.gamma1 = p.A1 * p.B1 * p.C;
  sp.kappa2 = p.A2 * p.B2 * growth / base;
  sp.gamma2 = p.A2 * p.B2 * p.C;
  sp.m = p.A3 * e3 / base;
  sp.a1 = p.A3 / base;
  sp.a2 = p.A4 * e4 / base;
  sp.b1 = p.A3 * p.B3 * growth / base;
  sp.b2 = p.A4 * p.B4 * growth / base;
  sp.x_star = p.A1 * p.D * e1 / (p.A3 * e3 * growth);
  sp.k = p.A2 * e2 / base;
  sp.c = (base / (p.A2 * e2)) * (p.A2 * p.C * e2 - p.D) / growth;

  // m was computed from its own formula; the identity with a1 is checked here.
  check_invariants(sp);
  return sp;
}

double mixotroph_efficiency_bound(const ScaledParams& sp) noexcept {
  return sp.a1 * (1.0 + sp.b2 * sp.x_star) / (1.0 + sp.b1 * sp.x_star);
}

}  // namespace mixodyn
