#include <cmath>
#include <random>

#include "doctest.h"
#include "mixodyn/equilibria.hpp"
#include "mixodyn/error.hpp"
#include "support.hpp"

using namespace mixodyn;
using mixodyn::testing::diagram_params;
using mixodyn::testing::rel_diff;

namespace {

// Frozen 40-digit oracles for the base parameters c=.2, k=.95, b2=55.
constexpr double kXMinus45 = 0.0047126228089316561;
constexpr double kXPlus45 = 0.081448993352684506;
constexpr double kA2Star = 5.1118463488431107;
constexpr double kA2Plus = 6.4403402849347381;
constexpr double kHopfComp = 3.5786932431176610;

ScaledParams random_sp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return make_saturated(0.02 + 0.96 * u(rng), 0.02 + 0.96 * u(rng), 0.01 + 0.98 * u(rng),
                        0.5 + 10 * u(rng), 0.05 + 8 * u(rng), 60 * u(rng), 60 * u(rng));
}

ScaledParams with_a2(ScaledParams sp, double a2) {
  sp.a2 = a2;
  return sp;
}

double max_residual(const State3& s, const ScaledParams& sp) {
  const Vec3 r = rhs_saturated(s, sp);
  return std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

// G(x_star) - F2(x_star) increases in a2, so plain bisection finds tilde_a2.
double tilde_by_bisection(const ScaledParams& sp) {
  auto gap = [&](double a2) {
    const auto v = eval_structural_functions(sp.x_star, with_a2(sp, a2));
    return v.G - v.F2;
  };
  double lo = 1e-12, hi = 1.0;
  while (gap(hi) < 0) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double breve_direct(const ScaledParams& sp) {
  // G(x_star) = F1(x_star) solved for a2.
  const auto v = eval_structural_functions(sp.x_star, sp);
  return sp.k * (v.F1 - sp.c + sp.x_star) / sp.x_star;
}

}  // namespace

TEST_CASE("boundary equilibria at the two-competitor scenario") {
  const ScaledParams sp = diagram_params(0.05, 4.5);
  const auto eq = boundary_equilibria(sp);
  REQUIRE(eq.size() == 4);
  CHECK(eq[0].point == State3{0, 0, 0});
  CHECK(eq[1].point == State3{1, 0, 0});
  CHECK(eq[2].point == State3{0, 0, 0.2});
  CHECK(eq[3].kind == EquilibriumKind::PredatorPrey);
  CHECK(eq[3].point.x == 0.05);
  CHECK(rel_diff(eq[3].point.y, 0.95 * 3.5 / 12.0) < 1e-15);
  for (const auto& e : eq) CHECK(max_residual(e.point, sp) <= 1e-15);
}

TEST_CASE("competition roots at a2 = 4.5") {
  const ScaledParams sp = diagram_params(0.05, 4.5);
  const auto cr = competition_roots(4.5, sp);
  REQUIRE(cr.roots.size() == 2);
  CHECK(rel_diff(cr.roots[0], kXMinus45) < 1e-13);
  CHECK(rel_diff(cr.roots[1], kXPlus45) < 1e-13);
  const auto eq = competition_equilibria(sp);
  REQUIRE(eq.size() == 2);
  CHECK(eq[0].kind == EquilibriumKind::CompetitionMinus);
  CHECK(eq[1].kind == EquilibriumKind::CompetitionPlus);
  for (const auto& e : eq) {
    const auto v = eval_structural_functions(e.point.x, sp);
    CHECK(e.point.z > 0);
    CHECK(std::abs(v.F2 - v.G) < 1e-13);
    CHECK(max_residual(e.point, sp) <= 1e-12);
  }
}

TEST_CASE("one competition equilibrium between the two transcriticals") {
  const ScaledParams base = diagram_params(0.05, 1.0);
  for (double a2 = 0.8; a2 < 4.0; a2 += 0.1) {
    const ScaledParams sp = with_a2(base, a2);
    CHECK(competition_equilibria(sp).size() == 1);
    CHECK(predicted_competition_count(sp) == 1);
  }
  CHECK(predicted_competition_count(with_a2(base, 2.0)) == 1);
  CHECK(predicted_competition_count(with_a2(base, 4.5)) == 2);
}

TEST_CASE("root at the origin is excluded when a2 = hat_a2") {
  const ScaledParams sp = diagram_params(0.05, 4.0);
  CHECK(competition_quadratic(0.0, 4.0, sp) == 0.0);
  const auto cr = competition_roots(4.0, sp);
  for (double r : cr.roots) CHECK(r > 1e-12);
  // The surviving root is the x_+ branch.
  REQUIRE(cr.roots.size() == 1);
  const auto lo = competition_roots(4.0 - 1e-6, sp).roots;
  REQUIRE(lo.size() == 1);
  CHECK(std::abs(cr.roots[0] - lo[0]) < 1e-5);
}

TEST_CASE("linear competition equation when b2 = 0") {
  const ScaledParams sp = make_saturated(0.2, 0.95, 0.1, 8.5, 2.0, 50.0, 0.0);
  const auto cr = competition_roots(2.0, sp);
  CHECK(cr.linear);
  CHECK(cr.roots.size() <= 1);
  for (double r : cr.roots) CHECK(std::abs(competition_quadratic(r, 2.0, sp)) < 1e-14);
}

TEST_CASE("threshold set for the base parameters") {
  const ThresholdSet t = a2_thresholds(diagram_params(0.05, 4.5));
  CHECK(std::abs(t.check_a2 - 0.76) < 1e-15);
  CHECK(std::abs(t.hat_a2 - 4.0) < 1e-15);
  CHECK(rel_diff(t.a2_plus, kA2Plus) < 1e-14);
  CHECK(t.a2_minus < 0);
  REQUIRE(t.a2_star);
  CHECK(std::abs(*t.a2_star - kA2Star) < 1e-10);
  CHECK(std::abs(t.star() - kA2Star) < 1e-10);
  REQUIRE(t.hopf_comp_a2);
  CHECK(std::abs(*t.hopf_comp_a2 - kHopfComp) < 1e-8);
  CHECK(t.underline_a2 < t.hat_a2);
  CHECK(rel_diff(t.breve_a2, breve_direct(diagram_params(0.05, 4.5))) < 1e-12);
}

TEST_CASE("star absent without a two-equilibria band") {
  // a2_plus <= hat when b2 is small.
  const ThresholdSet t = a2_thresholds(make_saturated(0.2, 0.95, 0.1, 8.5, 1.0, 50.0, 2.0));
  CHECK(t.a2_plus <= t.hat_a2);
  CHECK_FALSE(t.a2_star);
  try {
    (void)t.star();
    FAIL("expected StarAbsent");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StarAbsent);
  }
}

TEST_CASE("threshold invariants on random parameters") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const ThresholdSet t = a2_thresholds(sp);
    CHECK(t.a2_minus < 0);
    CHECK(t.a2_plus > 0);
    CHECK(t.check_a2 < t.hat_a2);
    CHECK(t.underline_a2 < t.hat_a2);
    if (sp.x_star > sp.c) CHECK(t.tilde_a2 <= t.hat_a2 * (1 + 1e-12));
    CHECK(std::abs(t.tilde_a2 - tilde_by_bisection(sp)) < 1e-10 * (1 + t.tilde_a2));
    CHECK(rel_diff(t.breve_a2, breve_direct(sp)) < 1e-9);
  }
}

TEST_CASE("q_star has one root in each interval") {
  std::mt19937_64 rng(22);
  int tested = 0;
  for (int i = 0; i < 2000 && tested < 300; ++i) {
    const ScaledParams sp = random_sp(rng);
    const ThresholdSet t = a2_thresholds(sp);
    if (!(t.a2_plus > t.hat_a2)) continue;
    ++tested;
    auto sign_changes = [&](double lo, double hi) {
      constexpr int n = 4000;
      int changes = 0;
      double prev = q_star(lo, sp);
      for (int j = 1; j <= n; ++j) {
        const double cur = q_star(lo + (hi - lo) * j / n, sp);
        if ((cur < 0) != (prev < 0)) ++changes;
        prev = cur;
      }
      return changes;
    };
    const double far = 50 * (std::abs(t.a2_minus) + t.a2_plus + t.hat_a2 + 1);
    CHECK(sign_changes(-far, t.a2_minus) == 1);
    CHECK(sign_changes(t.a2_minus, 0.0) == 1);
    CHECK(sign_changes(t.hat_a2, t.a2_plus) == 1);
    CHECK(sign_changes(t.a2_plus, far) == 1);
    REQUIRE(t.a2_star);
    CHECK(*t.a2_star > t.hat_a2);
    CHECK(*t.a2_star < t.a2_plus);
    CHECK(std::abs(q_star(*t.a2_star, sp)) <
          1e-6 * std::abs(q_star(t.hat_a2, sp)) + 1e-12);
  }
  CHECK(tested == 300);
}

TEST_CASE("predicted and solved competition counts agree") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagreements = 0, twos = 0;
  for (int i = 0; i < 100; ++i) {
    const ScaledParams base = random_sp(rng);
    const ThresholdSet t = a2_thresholds(base);
    for (int j = 0; j < 100; ++j) {
      const double a2 = 0.01 + 1.2 * std::max(t.hat_a2, t.a2_plus) * u(rng);
      auto near = [&](double thr) { return std::abs(a2 - thr) < 1e-9 * std::max(1.0, thr); };
      if (near(t.check_a2) || near(t.hat_a2) || (t.a2_star && near(*t.a2_star))) continue;
      const ScaledParams sp = with_a2(base, a2);
      const int predicted = predicted_competition_count(sp);
      const int solved = static_cast<int>(competition_equilibria(sp).size());
      if (predicted != solved) ++disagreements;
      if (solved == 2) ++twos;
    }
  }
  CHECK(disagreements == 0);
  CHECK(twos > 10);
}

TEST_CASE("necessary criterion for two competition equilibria") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 500; ++i) {
    const ScaledParams base = random_sp(rng);
    if (base.c * base.b2 > 1 / base.k - 1) continue;
    for (double a2 = 0.05; a2 < 30; a2 *= 1.3) {
      CHECK(predicted_competition_count(with_a2(base, a2)) != 2);
    }
  }
}

TEST_CASE("coexistence equilibrium") {
  const ScaledParams sp = diagram_params(0.05, 4.5);
  const auto co = coexistence_equilibrium(sp);
  REQUIRE(co);
  CHECK(rel_diff(co->point.y, 0.080538555691554468) < 1e-12);
  CHECK(rel_diff(co->point.z, 0.30630354957160343) < 1e-12);
  CHECK(max_residual(co->point, sp) <= 1e-12);
  const auto v = eval_structural_functions(0.05, sp);
  CHECK(v.F1 < v.G);
  CHECK(v.G < v.F2);

  // z_star vanishes on the lower boundary.
  const double breve = breve_a2(sp);
  const auto yz = coexistence_coordinates(with_a2(sp, breve));
  CHECK(std::abs(yz[1]) < 1e-12);
  CHECK_FALSE(coexistence_equilibrium(with_a2(sp, breve * 0.99)));
  CHECK_FALSE(coexistence_equilibrium(with_a2(sp, tilde_a2(sp) * 1.01)));

  // Local condition failure.
  const ScaledParams bad = make_saturated(0.2, 0.95, 0.05, 1.0, 2.0, 0.0, 0.0);
  try {
    (void)coexistence_equilibrium(bad);
    FAIL("expected LocalConditionViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LocalConditionViolated);
  }
}

TEST_CASE("existence iff F1 < G < F2 and breve < a2 < tilde") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 20000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const auto f = eval_structural_functions(sp.x_star, sp);
    if (!(f.f1 > f.f2)) continue;
    const auto v = f;
    if (std::abs(v.G - v.F1) < 1e-9 || std::abs(v.G - v.F2) < 1e-9) continue;
    const bool by_isoclines = v.F1 < v.G && v.G < v.F2;
    const bool exists = coexistence_equilibrium(sp).has_value();
    CHECK(exists == by_isoclines);
    const double lo = breve_a2(sp), hi = tilde_a2(sp);
    if (std::abs(sp.a2 - lo) > 1e-9 && std::abs(sp.a2 - hi) > 1e-9) {
      CHECK(exists == (lo < sp.a2 && sp.a2 < hi));
    }
  }
}

TEST_CASE("window test agrees with the direct comparison") {
  std::mt19937_64 rng(26);
  int nonempty = 0, empty = 0;
  for (int i = 0; i < 20000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const double lo = breve_direct(sp), hi = tilde_by_bisection(sp);
    if (std::abs(lo - hi) < 1e-8) continue;
    const bool w = coexistence_window_nonempty(sp);
    CHECK(w == (lo < hi));
    (w ? nonempty : empty)++;
  }
  CHECK(nonempty > 100);
  CHECK(empty > 100);
  for (double xs = 0.01; xs < 1.0; xs += 0.01) {
    CHECK(coexistence_window_nonempty(diagram_params(xs, 1.0)));
  }
}

TEST_CASE("window nonempty for every k when s <= 0") {
  // s <= 0 when c - x_star is large relative to 1 - x_star.
  for (double k = 0.01; k < 1.0; k += 0.01) {
    const ScaledParams sp = make_saturated(0.9, k, 0.05, 8.5, 1.0, 0.0, 10.0);
    const double xs = sp.x_star, lift = 1 + sp.a1;
    REQUIRE((1 - xs) - lift * (sp.c - xs) <= 0);
    CHECK(coexistence_window_nonempty(sp));
  }
}

TEST_CASE("ordering chain of thresholds") {
  std::mt19937_64 rng(27);
  int tested = 0;
  for (int i = 0; i < 20000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const double hat = (1 - sp.c) / sp.c;
    const double breve_split = (sp.a1 - hat) / (sp.b1 * hat);
    if (!(sp.x_star > std::max(sp.c, breve_split)) || !coexistence_window_nonempty(sp)) continue;
    const ThresholdSet t = a2_thresholds(sp);
    CHECK(t.check_a2 < t.breve_a2);
    CHECK(t.breve_a2 < t.tilde_a2);
    CHECK(t.tilde_a2 <= t.hat_a2 * (1 + 1e-12));
    ++tested;
  }
  CHECK(tested > 200);
}

TEST_CASE("lower boundary crosses check_a2 where the sign test says") {
  std::mt19937_64 rng(28);
  for (int i = 0; i < 20000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const double hat = (1 - sp.c) / sp.c;
    const double breve_split = (sp.a1 - hat) / (sp.b1 * hat);
    const double check = sp.k * (1 - sp.c);
    const double breve = breve_a2(sp);
    if (std::abs(sp.x_star - breve_split) < 1e-9 || std::abs(breve - check) < 1e-9) continue;
    CHECK((check < breve) == (sp.x_star > breve_split));
  }
  // Base parameters: crossing at x_star = (8.5 - 4)/(50*4) = 0.0225.
  CHECK(std::abs(breve_a2(diagram_params(0.0225, 1.0)) - 0.76) < 1e-12);
}

TEST_CASE("coexistence boundaries meet at check_a2 as x_star tends to one") {
  const ScaledParams sp = diagram_params(1 - 1e-6, 1.0);
  CHECK(std::abs(breve_a2(sp) - 0.76) < 1e-4);
  CHECK(std::abs(tilde_a2(sp) - 0.76) < 1e-4);
}

TEST_CASE("all equilibria are in the simplex with small residuals") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 5000; ++i) {
    const ScaledParams sp = random_sp(rng);
    const auto f = eval_structural_functions(sp.x_star, sp);
    if (!(f.f1 > f.f2)) continue;
    for (const auto& e : all_equilibria(sp)) {
      CHECK(max_residual(e.point, sp) <= 1e-9);
      CHECK(e.point.x >= 0);
      CHECK(e.point.y >= 0);
      CHECK(e.point.z >= 0);
      CHECK(e.point.x + e.point.y + e.point.z <= 1 + 1e-12);
      if (e.kind == EquilibriumKind::CompetitionMinus || e.kind == EquilibriumKind::CompetitionPlus)
        CHECK(e.point.y == 0.0);
    }
  }
}
