#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <set>

#include "core/geometry.hpp"
#include "core/line.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace sticky;

namespace {

int octa_index(const ModeCatalog& catalog) {
  for (size_t k = 0; k < catalog.rigid.size(); ++k) {
    if (catalog.rigid[k].sigma == 24) return static_cast<int>(k);
  }
  REQUIRE(false);
  return -1;
}

int poly_index(const ModeCatalog& catalog) {
  for (size_t k = 0; k < catalog.rigid.size(); ++k) {
    if (catalog.rigid[k].sigma == 2) return static_cast<int>(k);
  }
  REQUIRE(false);
  return -1;
}

const LineClass& class_with_nu(const LineCatalog& lines, const std::map<int, int>& nu) {
  for (const LineClass& cls : lines.classes) {
    if (cls.nu == nu) return cls;
  }
  REQUIRE_MESSAGE(false, "no line class with the requested adjacency counts");
  return lines.classes.front();
}

}  // namespace

TEST_CASE("breaking any octahedron bond leads to the polytetrahedron") {
  ModeCatalog catalog = standard_catalog(6);
  int octa = octa_index(catalog);
  Bond bond = catalog.rigid[static_cast<size_t>(octa)].graph.bonds().front();
  LineManifold line = trace_line(catalog, octa, bond);
  CHECK(line.start_mode == octa);
  CHECK(line.end_mode == poly_index(catalog));
  CHECK_FALSE(line.tie_flag);
}

TEST_CASE("line samples satisfy the walk contract") {
  ModeCatalog catalog = standard_catalog(6);
  int octa = octa_index(catalog);
  Bond bond = catalog.rigid[static_cast<size_t>(octa)].graph.bonds().front();
  LineManifold line = trace_line(catalog, octa, bond);

  REQUIRE(line.samples.size() > 10);
  for (size_t k = 0; k + 1 < line.samples.size(); ++k) {
    double step = line.samples[k + 1].s - line.samples[k].s;
    CHECK(step >= 0.5 * kLineStep - 1e-12);
    CHECK(step <= 1.5 * kLineStep + 1e-12);
    // Continuity of the integrand factors along the walk.
    CHECK(std::abs(line.samples[k + 1].h - line.samples[k].h) < 10 * kLineStep);
    CHECK(std::abs(line.samples[k + 1].inertia - line.samples[k].inertia) < 10 * kLineStep);
  }
  for (size_t k = 0; k < line.samples.size(); k += 7) {
    const Configuration& x = line.samples[k].x;
    CHECK(excess_vector(x, line.bonds).lpNorm<Eigen::Infinity>() < 10 * tol::projection);
    for (int i = 0; i < x.n; ++i) {
      for (int j = i + 1; j < x.n; ++j) {
        CHECK(bond_excess(x, {i, j}) > -1e-9);
      }
    }
  }
  // The far endpoint has the formed pair exactly on the unit sphere.
  CHECK(std::abs(bond_excess(line.samples.back().x, line.formed)) < tol::bond_hit);
}

TEST_CASE("n=6 line census: five classes with the published multiplicities") {
  ModeCatalog catalog = standard_catalog(6);
  LineCatalog lines = build_line_catalog(catalog);
  REQUIRE(lines.classes.size() == 5);

  std::multiset<long> mults;
  for (const LineClass& cls : lines.classes) mults.insert(cls.multiplicity);
  CHECK(mults == std::multiset<long>{90, 180, 180, 360, 360});

  // The octahedron-polytetrahedron connector: 12 instances seen from the
  // octahedron, 1 from the polytetrahedron.
  int octa = octa_index(catalog), poly = poly_index(catalog);
  const LineClass& connector = class_with_nu(lines, {{octa, 12}, {poly, 1}});
  CHECK(connector.multiplicity == 180);
  CHECK(std::minmax(connector.representative.start_mode, connector.representative.end_mode) ==
        std::minmax(octa, poly));
}

TEST_CASE("n=6 partition-function weights of the published line modes") {
  ModeCatalog catalog = standard_catalog(6);
  LineCatalog lines = build_line_catalog(catalog);
  int octa = octa_index(catalog), poly = poly_index(catalog);

  // Connector line (published z = 15.40, Q = 4.66 reproduced by quadrature).
  const LineClass& connector = class_with_nu(lines, {{octa, 12}, {poly, 1}});
  double z7 = static_cast<double>(connector.multiplicity) * connector.representative.zeta;
  CHECK(z7 == doctest::Approx(15.40).epsilon(0.02));
  CHECK(connector.representative.length == doctest::Approx(0.627).epsilon(0.02));

  // The longest polytetrahedron-polytetrahedron line (published z = 126.89).
  const LineClass* longest = nullptr;
  for (const LineClass& cls : lines.classes) {
    if (!longest || cls.representative.length > longest->representative.length) {
      longest = &cls;
    }
  }
  REQUIRE(longest != nullptr);
  double z6 = static_cast<double>(longest->multiplicity) * longest->representative.zeta;
  CHECK(z6 == doctest::Approx(126.89).epsilon(0.02));

  // Full 1-D partition function (published Z_1 = 256.27).
  double z1 = 0.0;
  for (const LineClass& cls : lines.classes) {
    z1 += static_cast<double>(cls.multiplicity) * cls.representative.zeta;
  }
  CHECK(z1 == doctest::Approx(256.27).epsilon(0.01));
}

TEST_CASE("n=5 line census: two classes") {
  ModeCatalog catalog = standard_catalog(5);
  LineCatalog lines = build_line_catalog(catalog);
  REQUIRE(lines.classes.size() == 2);
  std::multiset<long> mults;
  for (const LineClass& cls : lines.classes) mults.insert(cls.multiplicity);
  CHECK(mults == std::multiset<long>{15, 30});
}

TEST_CASE("tracing from either endpoint agrees") {
  ModeCatalog catalog = standard_catalog(6);
  int octa = octa_index(catalog), poly = poly_index(catalog);
  Bond bond = catalog.rigid[static_cast<size_t>(octa)].graph.bonds().front();
  LineManifold forward = trace_line(catalog, octa, bond);
  REQUIRE(forward.end_mode == poly);

  // Map the formed bond back through the isomorphism onto the catalog
  // representative and retrace from the far side.
  const ContactGraph& poly_graph = catalog.rigid[static_cast<size_t>(poly)].graph;
  auto perm = isomorphism(poly_graph, forward.end_graph);
  REQUIRE(perm.has_value());
  Bond reverse_break{-1, -1};
  for (const Bond& b : poly_graph.bonds()) {
    int pi = (*perm)[static_cast<size_t>(b.i)], pj = (*perm)[static_cast<size_t>(b.j)];
    if (std::minmax(pi, pj) == std::minmax(forward.formed.i, forward.formed.j)) {
      reverse_break = b;
    }
  }
  REQUIRE(reverse_break.i >= 0);

  LineManifold backward = trace_line(catalog, poly, reverse_break);
  CHECK(backward.end_mode == octa);
  CHECK(std::abs(backward.length - forward.length) < 2 * kLineStep);
  CHECK(backward.zeta == doctest::Approx(forward.zeta).epsilon(0.01));
  CHECK(backward.q_integral == doctest::Approx(forward.q_integral).epsilon(0.01));
}

TEST_CASE("quadrature converges under step halving") {
  ModeCatalog catalog = standard_catalog(6);
  int octa = octa_index(catalog);
  Bond bond = catalog.rigid[static_cast<size_t>(octa)].graph.bonds().front();
  LineManifold coarse = trace_line(catalog, octa, bond, 0.01);
  LineManifold fine = trace_line(catalog, octa, bond, 0.005);
  CHECK(fine.zeta == doctest::Approx(coarse.zeta).epsilon(0.005));
  CHECK(fine.q_integral == doctest::Approx(coarse.q_integral).epsilon(0.005));
}

TEST_CASE("line integrals are exact for a constant integrand") {
  std::vector<PathSample> samples;
  Configuration dummy = fixtures::dimer();
  const double c = 0.37, length = 2.5;
  for (int k = 0; k <= 10; ++k) {
    samples.push_back({dummy, length * k / 10.0, c, 1.0});
  }
  auto [zeta, q] = line_integrals(samples);
  CHECK(zeta == doctest::Approx(c * length).epsilon(1e-12));
  CHECK(q == doctest::Approx(length / c).epsilon(1e-12));
}

TEST_CASE("floppy multiplicity divides or throws") {
  ModeCatalog catalog = standard_catalog(6);
  int octa = octa_index(catalog), poly = poly_index(catalog);
  CHECK(floppy_multiplicity(catalog, {{octa, 12}, {poly, 1}}, 2) == 180);
  CHECK(floppy_multiplicity(catalog, {{poly, 1}}, 2) == 90);
  CHECK_THROWS_AS(floppy_multiplicity(catalog, {{octa, 1}}, 2), InconsistentInput);
}
