#include "mixodyn/dynamics.hpp"

#include <cmath>

#include "mixodyn/error.hpp"

namespace mixodyn {

Vec4 rhs_chemostat(const ChemostatState& s, const ChemostatParams& p) {
  const double uptake_auto = p.A1 * s.S * s.X / (1.0 + p.A1 * p.B1 * s.S);
  const double mixo_den = 1.0 + p.A2 * p.B2 * s.S + p.A4 * p.B4 * s.X;
  const double uptake_mixo = p.A2 * s.S * s.Z / mixo_den;
  const double graze_mixo = p.A4 * s.X * s.Z / mixo_den;
  const double graze_herb = p.A3 * s.X * s.Y / (1.0 + p.A3 * p.B3 * s.X);
  return {
      p.C * p.D - p.D * s.S - uptake_auto - uptake_mixo,
      uptake_auto - p.D * s.X - graze_herb - graze_mixo,
      graze_herb - p.D * s.Y,
      uptake_mixo + graze_mixo - p.D * s.Z,
  };
}

Vec3 rhs_reduced(double X, double Y, double Z, const ChemostatParams& p) {
  const double S = p.C - X - Y - Z;
  if (S < 0.0) {
    throw Error(ErrorKind::ManifoldViolation, "X + Y + Z exceeds C");
  }
  const double uptake_auto = p.A1 * S * X / (1.0 + p.A1 * p.B1 * S);
  const double mixo_den = 1.0 + p.A2 * p.B2 * S + p.A4 * p.B4 * X;
  const double graze_herb = p.A3 * X * Y / (1.0 + p.A3 * p.B3 * X);
  return {
      uptake_auto - p.D * X - graze_herb - p.A4 * X * Z / mixo_den,
      graze_herb - p.D * Y,
      (p.A2 * S * Z + p.A4 * X * Z) / mixo_den - p.D * Z,
  };
}

Vec3 rhs_scaled(const State3& s, const ScaledParams& sp) {
  const double total = s.x + s.y + s.z;
  const double den1 = 1.0 + sp.gamma1 - sp.kappa1 * total;
  const double den2 = 1.0 + sp.gamma2 - sp.kappa2 * total + sp.b2 * s.x;
  if (!(den1 > 0.0) || !(den2 > 0.0)) {
    throw Error(ErrorKind::DenominatorVanishes, "saturation denominator is not positive");
  }
  const double herb_gain = sp.a1 / (1.0 + sp.b1 * sp.x_star);
  return {
      s.x * (1.0 - total) / den1 - sp.a1 * s.x * s.y / (1.0 + sp.b1 * s.x) -
          sp.a2 * s.x * s.z / den2,
      herb_gain * (s.x - sp.x_star) / (1.0 + sp.b1 * s.x) * s.y,
      (sp.k * s.z * (sp.c - total) + sp.a2 * s.x * s.z) / den2,
  };
}

Vec3 rhs_saturated(const State3& s, const ScaledParams& sp) {
  const double total = s.x + s.y + s.z;
  const double sat1 = 1.0 + sp.b1 * s.x;
  const double sat2 = 1.0 + sp.b2 * s.x;
  const double herb_gain = sp.a1 / (1.0 + sp.b1 * sp.x_star);
  return {
      s.x * (1.0 - total) - sp.a1 * s.x * s.y / sat1 - sp.a2 * s.x * s.z / sat2,
      herb_gain * (s.x - sp.x_star) / sat1 * s.y,
      sp.k * s.z / sat2 * (sp.c - total + sp.a2 / sp.k * s.x),
  };
}

Vec3 rhs_isocline(const State3& s, const ScaledParams& sp) {
  const StructuralValues v = eval_structural_functions(s.x, sp);
  const double logistic = s.x * (1.0 - s.x) * (1.0 + sp.b2 * s.x) / sp.k;
  return {
      logistic - s.y * v.f1 - s.z * v.f2,
      s.y * v.psi,
      s.z * (v.G - s.y - s.z),
  };
}

StructuralValues eval_structural_functions(double x, const ScaledParams& sp) {
  const double sat1 = 1.0 + sp.b1 * x;
  const double sat2 = 1.0 + sp.b2 * x;
  StructuralValues v;
  v.f1 = x * (1.0 + sp.a1 + sp.b1 * x) * sat2 / (sp.k * sat1);
  v.f2 = x * (1.0 + sp.a2 + sp.b2 * x) / sp.k;
  v.F1 = (1.0 - x) * sat1 / (1.0 + sp.a1 + sp.b1 * x);
  v.F2 = (1.0 - x) * sat2 / (1.0 + sp.a2 + sp.b2 * x);
  v.psi = sp.a1 / (1.0 + sp.b1 * sp.x_star) * (x - sp.x_star) * sat2 / (sp.k * sat1);
  v.G = sp.c - x + sp.a2 / sp.k * x;
  return v;
}

namespace {

double isocline_slope(double x, double a, double b) {
  const double den = 1.0 + a + b * x;
  return (-1.0 - a + a * b - 2.0 * b * (a + 1.0) * x - b * b * x * x) / (den * den);
}

}  // namespace

StructuralDerivatives eval_structural_derivatives(double x, const ScaledParams& sp) {
  const double sat1 = 1.0 + sp.b1 * x;
  const double sat2 = 1.0 + sp.b2 * x;
  StructuralDerivatives d;

  const double num = x * (1.0 + sp.a1 + sp.b1 * x) * sat2;
  const double dnum = (1.0 + sp.a1 + 2.0 * sp.b1 * x) * sat2 +
                      x * (1.0 + sp.a1 + sp.b1 * x) * sp.b2;
  d.df1 = (dnum * sat1 - num * sp.b1) / (sp.k * sat1 * sat1);
  d.df2 = (1.0 + sp.a2 + 2.0 * sp.b2 * x) / sp.k;
  d.dF1 = isocline_slope(x, sp.a1, sp.b1);
  d.dF2 = isocline_slope(x, sp.a2, sp.b2);

  const double gain = sp.a1 / (1.0 + sp.b1 * sp.x_star) / sp.k;
  const double u = (x - sp.x_star) * sat2;
  const double du = sat2 + sp.b2 * (x - sp.x_star);
  d.dpsi = gain * (du * sat1 - u * sp.b1) / (sat1 * sat1);
  d.dG = -1.0 + sp.a2 / sp.k;
  return d;
}

double f1_hump(double a1, double b1) noexcept {
  if (!(b1 > 1.0 + 1.0 / a1)) return -1.0;
  return (-a1 - 1.0 + std::sqrt(a1 * a1 + a1 + a1 * b1)) / b1;
}

Jacobian3 jacobian_saturated(const State3& s, const ScaledParams& sp) {
  const StructuralValues v = eval_structural_functions(s.x, sp);
  const StructuralDerivatives d = eval_structural_derivatives(s.x, sp);
  return {{
      {d.df1 * (v.F1 - s.y) + v.f1 * d.dF1 - s.z * d.df2, -v.f1, -v.f2},
      {s.y * d.dpsi, v.psi, 0.0},
      {s.z * d.dG, -s.z, v.G - s.y - 2.0 * s.z},
  }};
}

Jacobian3 jacobian_rhs_saturated(const State3& s, const ScaledParams& sp) {
  const double sat1 = 1.0 + sp.b1 * s.x;
  const double sat2 = 1.0 + sp.b2 * s.x;
  const double total = s.x + s.y + s.z;
  const double herb_gain = sp.a1 / (1.0 + sp.b1 * sp.x_star);
  const double mixo_rate = (sp.k * (sp.c - total) + sp.a2 * s.x) / sat2;
  const double dmixo_dx =
      ((-sp.k + sp.a2) * sat2 - sp.b2 * (sp.k * (sp.c - total) + sp.a2 * s.x)) /
      (sat2 * sat2);
  return {{
      {1.0 - 2.0 * s.x - s.y - s.z - sp.a1 * s.y / (sat1 * sat1) -
           sp.a2 * s.z / (sat2 * sat2),
       -s.x - sp.a1 * s.x / sat1, -s.x - sp.a2 * s.x / sat2},
      {herb_gain * s.y * (1.0 + sp.b1 * sp.x_star) / (sat1 * sat1),
       herb_gain * (s.x - sp.x_star) / sat1, 0.0},
      {s.z * dmixo_dx, -sp.k * s.z / sat2, mixo_rate - sp.k * s.z / sat2},
  }};
}

}  // namespace mixodyn
