#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "core/statmech.hpp"
#include "doctest.h"

using namespace sticky;

namespace {

const LandscapeSummary& six_summary() {
  static const LandscapeSummary summary = [] {
    ModeCatalog modes = standard_catalog(6);
    LineCatalog lines = build_line_catalog(modes);
    FaceCatalog faces = build_face_catalog(modes);
    return totals(modes, lines, faces);
  }();
  return summary;
}

LandscapeSummary five_summary(MultiplicityConvention convention) {
  ModeCatalog modes = standard_catalog(5, convention);
  LineCatalog lines = build_line_catalog(modes);
  FaceCatalog faces = build_face_catalog(modes);
  return totals(modes, lines, faces);
}

}  // namespace

TEST_CASE("closed-form stickiness reproduces the two operating points") {
  PotentialSpec a;
  a.depth = 8.5;
  a.range = 30.0;
  const StickyParameter ka = kappa_closed_form(a);
  CHECK(ka.provenance == KappaProvenance::closed_form);
  // Frozen from an independent evaluation of the closed form; the quoted
  // operating point is kappa = 16 +- 0.5.
  CHECK(ka.kappa == doctest::Approx(16.155911).epsilon(1e-6));
  CHECK(std::abs(ka.kappa - 16.0) < 0.5);

  PotentialSpec b;
  b.depth = 10.0;
  b.range = 50.0;
  const StickyParameter kb = kappa_closed_form(b);
  CHECK(kb.kappa == doctest::Approx(30.569264).epsilon(1e-6));
  CHECK(std::abs(kb.kappa - 31.0) < 1.0);

  // With the default cutoff 1 + 4/rho the truncation correction depends on
  // rho only through rho (r - 1), so doubling rho at fixed depth halves
  // kappa exactly.
  PotentialSpec a2 = a;
  a2.range = 60.0;
  CHECK(2.0 * kappa_closed_form(a2).kappa == doctest::Approx(ka.kappa).epsilon(1e-12));

  PotentialSpec bad = a;
  bad.depth = -1.0;
  CHECK_THROWS_AS(kappa_closed_form(bad), InconsistentInput);
  bad = a;
  bad.range = 0.0;
  CHECK_THROWS_AS(kappa_closed_form(bad), InconsistentInput);
  bad = a;
  bad.cutoff = 0.9;
  CHECK_THROWS_AS(kappa_closed_form(bad), InconsistentInput);
}

TEST_CASE("smooth-well stickiness follows the steepest-descent form") {
  // Parabolic well with depth 4 and curvature chosen so that
  // (2/pi) U'' = 15: kappa(T) must equal e^{4/T} / sqrt(15/T).
  const auto U = [](double r) {
    const double curvature = 15.0 * M_PI / 2.0;
    return -4.0 + 0.5 * curvature * (r - 1.05) * (r - 1.05);
  };
  for (double T : {0.5, 1.0, 2.0}) {
    const StickyParameter k = kappa_laplace(U, 1.0, 1.2, T);
    CHECK(k.provenance == KappaProvenance::laplace);
    const double expected = std::exp(4.0 / T) / std::sqrt(15.0 / T);
    CHECK(k.kappa == doctest::Approx(expected).epsilon(1e-6));
  }
  CHECK(kappa_laplace(U, 1.0, 1.2, 1.0).kappa == doctest::Approx(14.097182).epsilon(1e-6));

  // Monotone decreasing over the tested temperature range.
  double prev = kappa_laplace(U, 1.0, 1.2, 0.1).kappa;
  for (double T = 0.2; T <= 3.0; T += 0.1) {
    const double next = kappa_laplace(U, 1.0, 1.2, T).kappa;
    CHECK(next < prev);
    prev = next;
  }

  // The same law evaluated through StickyLaw matches.
  const StickyLaw law{-4.0, 15.0};
  CHECK(law.kappa(1.0) == doctest::Approx(std::exp(4.0) / std::sqrt(15.0)).epsilon(1e-12));

  // Shape errors: no interior minimum, or a minimum that is not a well.
  CHECK_THROWS_AS(kappa_laplace([](double r) { return r; }, 1.0, 1.2, 1.0),
                  InconsistentInput);
  CHECK_THROWS_AS(kappa_laplace([](double r) { return 1.0 + (r - 1.1) * (r - 1.1); },
                                1.0, 1.2, 1.0),
                  InconsistentInput);
  CHECK_THROWS_AS(kappa_laplace(U, 1.0, 1.2, -1.0), InconsistentInput);
}

TEST_CASE("free energies separate into bond and geometry terms") {
  // kappa = 1 leaves only the geometric term.
  CHECK(free_energy(10, 360, 0.5, 1.0) == doctest::Approx(-std::log(180.0)).epsilon(1e-12));

  // Differences depend only on the bond difference and the weight ratio.
  const double fa = free_energy(12, 15, 0.034 * 2.83, 20.0);
  const double fb = free_energy(10, 360, 0.104, 20.0);
  const double expected = -(12 - 10) * std::log(20.0) -
                          std::log(15.0 * 0.034 * 2.83 / (360.0 * 0.104));
  CHECK(fa - fb == doctest::Approx(expected).epsilon(1e-12));

  // More bonds win at large stickiness.
  CHECK(free_energy(12, 10, 0.1, 1e4) < free_energy(10, 10, 0.1, 1e4));

  CHECK_THROWS_AS(free_energy(10, 0, 0.5, 2.0), InconsistentInput);
  CHECK_THROWS_AS(free_energy(10, 5, -0.5, 2.0), InconsistentInput);
  CHECK_THROWS_AS(free_energy(10, 5, 0.5, 0.0), InconsistentInput);
}

TEST_CASE("six-sphere totals match the published sums") {
  const LandscapeSummary& s = six_summary();
  CHECK(s.n == 6);

  // Two rigid classes, five line classes, thirteen face classes.
  int counts[3] = {0, 0, 0};
  for (const SummaryRow& row : s.rows) {
    REQUIRE(row.dimension >= 0);
    REQUIRE(row.dimension <= 2);
    ++counts[row.dimension];
    CHECK(row.bonds == 12 - row.dimension);
    CHECK(row.multiplicity > 0);
    CHECK(row.zeta > 0.0);
    if (row.dimension == 1) CHECK(row.adjacent_modes.size() == 2);
    if (row.dimension == 2) CHECK(row.adjacent_modes.size() >= 3);
  }
  CHECK(counts[0] == 2);
  CHECK(counts[1] == 5);
  CHECK(counts[2] == 13);

  CHECK(std::abs(s.z0 - 36.08) < 0.01 * 36.08);
  CHECK(std::abs(s.z1 - 256.27) < 0.02 * 256.27);
  CHECK(std::abs(s.z2 - 1140.63) < 0.05 * 1140.63);
  CHECK(std::abs(s.z1 / s.z0 - 7.1) < 0.02 * 7.1);

  // The totals are exactly the sums of the rows they came from.
  double z[3] = {0.0, 0.0, 0.0};
  for (const SummaryRow& row : s.rows)
    z[row.dimension] += static_cast<double>(row.multiplicity) * row.zeta;
  CHECK(s.z0 == doctest::Approx(z[0]).epsilon(1e-12));
  CHECK(s.z1 == doctest::Approx(z[1]).epsilon(1e-12));
  CHECK(s.z2 == doctest::Approx(z[2]).epsilon(1e-12));

  // The default free-energy column refers to kappa = 1: pure geometry.
  for (const SummaryRow& row : s.rows)
    CHECK(row.free_energy ==
          doctest::Approx(-std::log(static_cast<double>(row.multiplicity) * row.zeta))
              .epsilon(1e-12));

  // Grand total at kappa = 1 is the plain sum.
  CHECK(partition_function(s, 1.0) == doctest::Approx(s.z0 + s.z1 + s.z2).epsilon(1e-12));
}

TEST_CASE("yields sum to one and cross where the totals say") {
  const LandscapeSummary& s = six_summary();
  for (double kappa : {0.01, 0.1, 1.0, 7.1, 16.0, 100.0, 1e4}) {
    const Yields y = yields(s, kappa);
    CHECK(y.y0 >= 0.0);
    CHECK(y.y1 >= 0.0);
    CHECK(y.y2 >= 0.0);
    CHECK(y.y0 + y.y1 + y.y2 == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(yields(s, 1e6).y0 > 0.999);
  CHECK(yields(s, 1e-6).y2 > 0.999);

  // Rigid and one-dimensional yields cross exactly at kappa = Z_1/Z_0,
  // which the published totals put near 7.1.
  const double crossing = s.z1 / s.z0;
  CHECK(std::abs(crossing - 7.1) < 0.02 * 7.1);
  const Yields at = yields(s, crossing);
  CHECK(at.y0 == doctest::Approx(at.y1).epsilon(1e-12));
}

TEST_CASE("multiplicity convention cancels out of every observable") {
  const LandscapeSummary table = five_summary(MultiplicityConvention::table);
  const LandscapeSummary doubled = five_summary(MultiplicityConvention::paper_formula);

  // Every multiplicity doubles, so the totals double...
  CHECK(doubled.z0 == doctest::Approx(2.0 * table.z0).epsilon(1e-12));
  CHECK(doubled.z1 == doctest::Approx(2.0 * table.z1).epsilon(1e-12));
  CHECK(doubled.z2 == doctest::Approx(2.0 * table.z2).epsilon(1e-12));

  // ...and every ratio, yield, and free-energy difference is unchanged.
  CHECK(doubled.z1 / doubled.z0 == doctest::Approx(table.z1 / table.z0).epsilon(1e-12));
  CHECK(doubled.z2 / doubled.z1 == doctest::Approx(table.z2 / table.z1).epsilon(1e-12));
  for (double kappa : {0.5, 7.0, 40.0}) {
    const Yields ya = yields(table, kappa);
    const Yields yb = yields(doubled, kappa);
    CHECK(ya.y0 == doctest::Approx(yb.y0).epsilon(1e-12));
    CHECK(ya.y1 == doctest::Approx(yb.y1).epsilon(1e-12));
    CHECK(ya.y2 == doctest::Approx(yb.y2).epsilon(1e-12));
  }
  REQUIRE(table.rows.size() == doubled.rows.size());
  REQUIRE(table.rows.size() >= 2);
  const double da = table.rows[1].free_energy - table.rows[0].free_energy;
  const double db = doubled.rows[1].free_energy - doubled.rows[0].free_energy;
  CHECK(da == doctest::Approx(db).epsilon(1e-12));
}

TEST_CASE("crossover temperatures sit at the stickiness the ratios demand") {
  const LandscapeSummary& s = six_summary();
  const StickyLaw law{-4.0, 15.0};

  // Frozen from bisection against the published ratios Z_1/Z_0 = 7.103 and
  // Z_2/Z_1 = 4.451 under this law; our recomputed ratios sit within 2%.
  const double t0 = critical_temperature(s, 0, law);
  const double t1 = critical_temperature(s, 1, law);
  CHECK(std::abs(t0 - 1.24864) < 0.02 * 1.24864);
  CHECK(std::abs(t1 - 1.51560) < 0.02 * 1.51560);

  // Each root satisfies its defining equation.
  CHECK(law.kappa(t0) * s.z0 == doctest::Approx(s.z1).epsilon(1e-9));
  CHECK(law.kappa(t1) * s.z1 == doctest::Approx(s.z2).epsilon(1e-9));

  // The two crossovers are close (measured gap about 18% of the larger).
  CHECK(std::abs(t1 - t0) / std::max(t0, t1) < 0.20);

  // A larger downhill ratio melts earlier.
  LandscapeSummary heavier = s;
  heavier.z2 *= 10.0;
  CHECK(critical_temperature(heavier, 1, law) < t1);

  CHECK_THROWS_AS(critical_temperature(s, 2, law), InconsistentInput);
  LandscapeSummary flat = s;
  flat.z1 = 1.1;
  flat.z0 = 1.0;  // ratio below the law's minimum stickiness of ~1.2
  CHECK_THROWS_AS(critical_temperature(flat, 0, law), InconsistentInput);
  CHECK_THROWS_AS(critical_temperature(s, 0, StickyLaw{4.0, 15.0}), InconsistentInput);
}
