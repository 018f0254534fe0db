#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "mixodyn/bifurcation.hpp"
#include "mixodyn/error.hpp"
#include "support.hpp"

using namespace mixodyn;
using mixodyn::testing::diagram_params;

namespace {

const ScaledParams kBase = diagram_params(0.1, 1.0);

std::string csv_of(const std::vector<RegionCell>& cells) {
  std::ostringstream os;
  write_sweep_csv(os, cells);
  return os.str();
}

int band_index(A2Band b) { return static_cast<int>(b); }

}  // namespace

TEST_CASE("marked points of the diagram") {
  CHECK(classify_region(0.26, 3.9, kBase).label == 'j');
  CHECK(classify_region(0.05, 4.5, kBase).label == 'd');
  CHECK(classify_region(0.15, 2.3, kBase).label == 'q');
  CHECK(classify_region(0.2, 0.5, kBase).label == 'x');

  const RegionCell j = classify_region(0.26, 3.9, kBase);
  CHECK(j.provenance == Provenance::Analytic);
  CHECK(j.signature.pp_regime == PPRegime::StableEq);
  CHECK(j.signature.a2_band == A2Band::HopfCompToHat);
  CHECK_FALSE(j.signature.coexist_exists);
  CHECK_FALSE(j.uncertain);

  const RegionCell q = classify_region(0.15, 2.3, kBase);
  CHECK(q.provenance == Provenance::SimulationAssisted);
}

TEST_CASE("2x2 sweep over the marked corners") {
  // Row-major, x_star outer.
  const SweepGrid g{{0.05, 0.26, 2}, {3.9, 4.5, 2}};
  const auto cells = sweep(g, kBase, kDefaultSimBudget, 2);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].x_star == 0.05);
  CHECK(cells[0].a2 == 3.9);
  CHECK(cells[1].x_star == 0.05);
  CHECK(cells[1].a2 == 4.5);
  CHECK(cells[2].x_star == 0.26);
  CHECK(cells[3].a2 == 4.5);
  CHECK(cells[1].label == 'd');
  CHECK(cells[2].label == 'j');
}

TEST_CASE("a grid inside one region has one label") {
  const SweepGrid g{{0.27, 0.35, 2}, {3.85, 3.95, 2}};
  const auto cells = sweep(g, kBase);
  for (const auto& c : cells) CHECK(c.label == 'j');
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(region_signature(0.0, 1.0, kBase), Error);
  CHECK_THROWS_AS(region_signature(0.1, 9.5, kBase), Error);
  CHECK_THROWS_AS(sweep({{0.1, 0.2, 1}, {1, 2, 2}}, kBase), Error);
  try {
    region_signature(0.1, 4.0, kBase);
    FAIL("expected OnBoundary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OnBoundary);
  }
  try {
    region_signature(f1_hump(8.5, 50.0), 1.0, kBase);
    FAIL("expected OnBoundary");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OnBoundary);
  }
}

TEST_CASE("boundary crossings on the 50x50 grid") {
  const ThresholdSet t = a2_thresholds(kBase);
  const double x_h = f1_hump(8.5, 50.0);
  REQUIRE(t.a2_star);
  REQUIRE(t.hopf_comp_a2);
  const double thresholds[] = {t.check_a2, *t.hopf_comp_a2, t.hat_a2, *t.a2_star};
  const Axis xs{0.01, 0.4, 50}, as{0.1, 6.0, 50};

  for (int i = 0; i < xs.n; ++i) {
    int prev_band = -1;
    double prev_a = 0;
    for (int j = 0; j < as.n; ++j) {
      const RegionSignature s = region_signature(xs.at(i), as.at(j), kBase);
      const int b = band_index(s.a2_band);
      if (prev_band >= 0) {
        CHECK(b >= prev_band);  // no reversals
        // Each band change is explained by exactly the thresholds in (prev_a, a].
        int straddled = 0;
        for (double thr : thresholds)
          if (prev_a < thr && thr <= as.at(j)) ++straddled;
        CHECK(b - prev_band == straddled);
      }
      prev_band = b;
      prev_a = as.at(j);
    }
  }
  for (int j = 0; j < as.n; ++j) {
    for (int i = 1; i < xs.n; ++i) {
      const auto l = region_signature(xs.at(i - 1), as.at(j), kBase).pp_regime;
      const auto r = region_signature(xs.at(i), as.at(j), kBase).pp_regime;
      const bool straddles = xs.at(i - 1) < x_h && x_h <= xs.at(i);
      CHECK((l != r) == straddles);
    }
  }
}

TEST_CASE("labels on the 50x50 grid respect the bands") {
  const SweepGrid g{{0.01, 0.4, 50}, {0.1, 6.0, 50}};
  const auto cells = sweep(g, kBase);
  REQUIRE(cells.size() == 2500);
  const std::set<char> above_star{'a', 'b'}, hat_star{'c', 'd', 'e', 'f'},
      hopf_hat{'g', 'h', 'i', 'j'},
      check_hopf{'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r', 's'}, below{'t', 'u', 'v', 'w', 'x', 'y'};
  int unresolved = 0;
  std::set<char> seen;
  for (const auto& c : cells) {
    if (!c.resolved()) {
      ++unresolved;
      CHECK_FALSE(c.note.empty());
      continue;
    }
    seen.insert(c.label);
    const std::set<char>* want = nullptr;
    switch (c.signature.a2_band) {
      case A2Band::AboveStar: want = &above_star; break;
      case A2Band::HatToStar: want = &hat_star; break;
      case A2Band::HopfCompToHat: want = &hopf_hat; break;
      case A2Band::CheckToHopfComp: want = &check_hopf; break;
      case A2Band::BelowCheck: want = &below; break;
    }
    CHECK(want->count(c.label) == 1);
    // Rows whose predator-prey subsystem settles to an equilibrium.
    const bool cycle = c.signature.pp_regime == PPRegime::Cycle;
    const std::set<char> stable_pp{'b', 'f', 'j', 'n', 'o', 's', 'y'};
    CHECK(cycle != (stable_pp.count(c.label) == 1));
    // Coexistence rows.
    const std::set<char> with_coexistence{'d', 'g', 'h', 'k', 'm', 'n', 'p', 't', 'u'};
    CHECK(c.signature.coexist_exists == (with_coexistence.count(c.label) == 1));
  }
  CHECK(unresolved <= 25);  // at most 1% of the raster
  for (char l : {'d', 'j', 'q', 'x'}) {
    CAPTURE(l);
    CHECK(seen.count(l) == 1);
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  const SweepGrid g{{0.02, 0.38, 8}, {0.3, 5.8, 8}};
  const std::string one = csv_of(sweep(g, kBase, kDefaultSimBudget, 1));
  const std::string three = csv_of(sweep(g, kBase, kDefaultSimBudget, 3));
  CHECK(one == three);
  CHECK(one.rfind("x_star,a2,region,provenance,pp_regime,n_comp_eq,comp_plus_planar_stable,"
                  "coexist_exists,coexist_stable,mixo_cc_stable\n",
                  0) == 0);
}

TEST_CASE("empty sweep CSV is header only") {
  const std::string s = csv_of({});
  CHECK(s ==
        "x_star,a2,region,provenance,pp_regime,n_comp_eq,comp_plus_planar_stable,"
        "coexist_exists,coexist_stable,mixo_cc_stable\n");
}

TEST_CASE("uncertain rows carry a flag") {
  RegionSignature s;
  s.pp_regime = PPRegime::Cycle;
  s.a2_band = A2Band::BelowCheck;
  s.breve_meets_check_x = 0.0225;
  const SimulationEvidence pp_only{Persistence::Present, Persistence::Absent,
                                   AttractorKind::LimitCycle};
  const RegionCell v = label_signature(0.01, 0.5, s, pp_only);
  CHECK(v.label == 'v');
  CHECK(v.uncertain);
  const RegionCell x = label_signature(0.2, 0.5, s, pp_only);
  CHECK(x.label == 'x');
  CHECK_FALSE(x.uncertain);
  const RegionCell missing = label_signature(0.2, 0.5, s, std::nullopt);
  CHECK_FALSE(missing.resolved());

  s.a2_band = A2Band::CheckToHopfComp;
  s.coexist_exists = true;
  s.coexist_stable = false;
  const RegionCell p = label_signature(0.1, 2.0, s, pp_only);
  CHECK(p.label == 'p');
  CHECK(p.uncertain);
  s.a2_band = A2Band::BelowCheck;
  const RegionCell t = label_signature(0.1, 0.5, s, pp_only);
  CHECK(t.label == 't');
  CHECK(t.uncertain);
}

TEST_CASE("coexistence cells lie between the two curves") {
  for (double x = 0.01; x < 0.4; x += 0.013) {
    ScaledParams sp = kBase;
    sp.x_star = x;
    const double lo = breve_a2(sp), hi = tilde_a2(sp);
    for (double a = 0.1; a < 6.0; a += 0.07) {
      RegionSignature s;
      try {
        s = region_signature(x, a, kBase);
      } catch (const Error&) {
        continue;
      }
      if (s.coexist_exists) {
        CHECK(lo < a);
        CHECK(a < hi);
      } else {
        CHECK((a <= lo || a >= hi));
      }
    }
  }
}

TEST_CASE("boundary curves") {
  const Axis grid{0.005, 0.995, 199};
  const BoundaryCurves c = boundary_curves(kBase, grid);
  REQUIRE(c.rows.size() == 199);
  CHECK(std::abs(c.check_a2 - 0.76) < 1e-15);
  CHECK(std::abs(c.hat_a2 - 4.0) < 1e-15);
  CHECK(std::abs(c.x_H - 0.25977772288098040) < 1e-14);
  for (const auto& r : c.rows) CHECK(r.breve_a2 < r.tilde_a2);

  // Both curves end at check_a2.
  ScaledParams near_one = kBase;
  near_one.x_star = 1 - 1e-6;
  const BoundaryCurves end = boundary_curves(near_one, {1 - 1e-6, 1 - 1e-6, 2});
  CHECK(std::abs(end.rows[0].breve_a2 - 0.76) < 1e-4);
  CHECK(std::abs(end.rows[0].tilde_a2 - 0.76) < 1e-4);

  // Blue curve meets a2 = 0.76 between the grid points that bracket 0.0225.
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    const bool crosses = (c.rows[i - 1].breve_a2 - 0.76) * (c.rows[i].breve_a2 - 0.76) < 0;
    const bool brackets = c.rows[i - 1].x_star < 0.0225 && 0.0225 < c.rows[i].x_star;
    CHECK(crosses == brackets);
  }

  // Red curve peaks at a2_star, within the grid's resolution in a2.
  REQUIRE(c.a2_star);
  double resolution = 0;
  for (std::size_t i = 1; i < c.rows.size(); ++i) {
    if (std::abs(c.rows[i].x_star - c.tilde_argmax) < 2 * (grid.hi - grid.lo) / (grid.n - 1))
      resolution = std::max(resolution, std::abs(c.rows[i].tilde_a2 - c.rows[i - 1].tilde_a2));
  }
  CHECK(c.tilde_max <= *c.a2_star + 1e-9);
  CHECK(*c.a2_star - c.tilde_max <= resolution);

  std::ostringstream os;
  write_curves_csv(os, c);
  CHECK(os.str().rfind("x_star,breve_a2,tilde_a2,check_a2,hat_a2,a2_star,hopf_comp_a2,x_H\n", 0) ==
        0);
}
