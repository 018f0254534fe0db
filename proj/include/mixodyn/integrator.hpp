#pragma once

// Dormand-Prince 5(4) with PI step control and FSAL. Header-only: the
// solver instantiates it for the 3-dim model and the 6-dim tangent system.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "mixodyn/error.hpp"

namespace mixodyn {

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
  double initial_step = 0.0;  // 0: pick automatically
  double max_step = 0.0;      // 0: unlimited
};

struct IntegratorStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// One accepted step, handed to the observer. Enough for cubic Hermite
/// interpolation on [t0, t1].
template <std::size_t N>
struct StepInfo {
  double t0, t1;
  std::array<double, N> y0, y1, f0, f1;
};

/// Cubic Hermite interpolant of component i at time t in [t0, t1].
template <std::size_t N>
double hermite(const StepInfo<N>& s, std::size_t i, double t) {
  const double h = s.t1 - s.t0;
  const double u = (t - s.t0) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  return h00 * s.y0[i] + h10 * h * s.f0[i] + h01 * s.y1[i] + h11 * h * s.f1[i];
}

template <std::size_t N>
double hermite_derivative(const StepInfo<N>& s, std::size_t i, double t) {
  const double h = s.t1 - s.t0;
  const double u = (t - s.t0) / h;
  const double d00 = 6 * u * u - 6 * u;
  const double d10 = 3 * u * u - 4 * u + 1;
  const double d01 = -d00;
  const double d11 = 3 * u * u - 2 * u;
  return (d00 * s.y0[i] + d01 * s.y1[i]) / h + d10 * s.f0[i] + d11 * s.f1[i];
}

/// Integrates y' = rhs(y) from t0 to t_end. The first `nonneg` components
/// must stay nonnegative: values in [-abs_tol, 0) are clamped to zero,
/// anything lower rejects the step. `observer(step)` runs after every
/// accepted step and may return false to stop early. Returns the final state.
template <std::size_t N, class Rhs, class Observer>
std::array<double, N> dopri5(Rhs&& rhs, std::array<double, N> y, double t0, double t_end,
                             const IntegratorOptions& opt, std::size_t nonneg,
                             Observer&& observer, IntegratorStats* stats = nullptr) {
  using Arr = std::array<double, N>;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                   a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  IntegratorStats local;
  IntegratorStats& st = stats ? *stats : local;

  const double span = t_end - t0;
  if (!(span > 0.0)) return y;

  Arr f = rhs(y);

  auto scale = [&](double a, double b) {
    return opt.abs_tol + opt.rel_tol * std::max(std::abs(a), std::abs(b));
  };

  double h = opt.initial_step;
  if (!(h > 0.0)) {
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = scale(y[i], y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(f[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span);
    Arr y1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * f[i];
    const Arr f1 = rhs(y1);
    double d2 = 0;
    for (std::size_t i = 0; i < N; ++i) {
      d2 = std::max(d2, std::abs(f1[i] - f[i]) / scale(y[i], y[i]));
    }
    d2 /= h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    h = std::min(100 * h0, h1);
  }
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

  constexpr double kSafety = 0.9, kAlpha = 0.17, kBeta = 0.04;
  constexpr double kMinFac = 0.2, kMaxFac = 10.0;
  double err_old = 1e-4;
  bool last_rejected = false;

  double t = t0;
  Arr k2, k3, k4, k5, k6, k7, yt, ynew;
  while (t < t_end) {
    bool final_step = false;
    if (t + h >= t_end || t + 1.01 * h >= t_end) {
      h = t_end - t;
      final_step = true;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorKind::StepSizeUnderflow, "step size fell below 1e-14 relative");
    }

    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * f[i];
    k2 = rhs(yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * f[i] + a32 * k2[i]);
    k3 = rhs(yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a41 * f[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * f[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * f[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(yt);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * f[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e =
          h * (e1 * f[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / scale(y[i], ynew[i]));
    }
    if (!std::isfinite(err)) err = 1e10;

    bool negative = false;
    bool clamped = false;
    for (std::size_t i = 0; i < nonneg; ++i) {
      if (ynew[i] < -opt.abs_tol) negative = true;
    }

    if (err <= 1.0 && !negative) {
      for (std::size_t i = 0; i < nonneg; ++i) {
        if (ynew[i] < 0.0) {
          ynew[i] = 0.0;
          clamped = true;
        }
      }
      if (clamped) k7 = rhs(ynew);
      const double t_new = final_step ? t_end : t + h;
      ++st.accepted;
      StepInfo<N> info{t, t_new, y, ynew, f, k7};
      t = t_new;
      y = ynew;
      f = k7;
      if (!observer(static_cast<const StepInfo<N>&>(info))) break;

      double fac = kSafety * std::pow(std::max(err, 1e-10), -kAlpha) * std::pow(err_old, kBeta);
      fac = std::clamp(fac, kMinFac, kMaxFac);
      if (last_rejected) fac = std::min(fac, 1.0);
      h *= fac;
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++st.rejected;
      if (negative && err <= 1.0) {
        if (h * 0.5 < 1e-14 * std::max(1.0, std::abs(t))) {
          throw Error(ErrorKind::NegativeStateBeyondTolerance,
                      "state component below -abs_tol that step refinement cannot remove");
        }
        h *= 0.5;
      } else {
        h *= std::max(kMinFac, kSafety * std::pow(err, -kAlpha));
      }
      last_rejected = true;
    }
  }
  return y;
}

}  // namespace mixodyn
