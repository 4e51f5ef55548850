#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "core/face.hpp"
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

// The bond pair of the octahedron whose face touches one octahedron corner
// and three polytetrahedron corners (located by boundary census, cached).
std::pair<Bond, Bond> four_corner_pair(const ModeCatalog& catalog) {
  static std::optional<std::pair<Bond, Bond>> cached;
  if (cached) return *cached;
  const int octa = octa_index(catalog);
  const int poly = poly_index(catalog);
  const ConstraintSet bonds = catalog.rigid[static_cast<size_t>(octa)].graph.bonds();
  for (size_t a = 0; a + 1 < bonds.size(); ++a) {
    for (size_t b = a + 1; b < bonds.size(); ++b) {
      FaceBoundary boundary = trace_boundary(catalog, octa, bonds[a], bonds[b]);
      if (boundary.corners.size() != 4) continue;
      int octa_corners = 0, poly_corners = 0;
      for (const FaceCorner& c : boundary.corners) {
        if (c.mode == octa) ++octa_corners;
        if (c.mode == poly) ++poly_corners;
      }
      if (octa_corners == 1 && poly_corners == 3) {
        cached = {bonds[a], bonds[b]};
        return *cached;
      }
    }
  }
  REQUIRE_MESSAGE(false, "no octahedron bond pair gave the four-corner face");
  return {};
}

const FaceManifold& four_corner_face(const ModeCatalog& catalog) {
  static std::optional<FaceManifold> cached;
  if (!cached) {
    auto [b1, b2] = four_corner_pair(catalog);
    cached = build_face(catalog, octa_index(catalog), b1, b2);
  }
  return *cached;
}

}  // namespace

TEST_CASE("piecewise-linear quadrature is exact on a synthetic mesh") {
  FaceManifold face;
  for (int k = 0; k < 3; ++k) {
    FacePoint p;
    p.h = 1.0 + k;
    p.inertia = 2.0 * (k + 1);
    face.points.push_back(p);
  }
  face.triangles.push_back({0, 1, 2});
  face.tri_areas.push_back(0.5);
  CHECK(fem_integrate(face, [](double, double) { return 2.0; }) == 2.0 * 0.5);
  // Vertex average of h = (1+2+3)/3 = 2, times area 1/2.
  CHECK(fem_integrate(face, [](double h, double) { return h; }) == 1.0);
  CHECK(euler_characteristic(face) == 1);
  face.tri_areas.clear();
  CHECK_THROWS_AS(fem_integrate(face, [](double, double) { return 1.0; }), InconsistentInput);
}

TEST_CASE("octahedron pair census finds the four-corner boundary") {
  ModeCatalog catalog = standard_catalog(6);
  auto [b1, b2] = four_corner_pair(catalog);
  FaceBoundary boundary = trace_boundary(catalog, octa_index(catalog), b1, b2);

  REQUIRE(boundary.corners.size() == 4);
  REQUIRE(boundary.edges.size() == 4);
  CHECK(boundary.corners[0].mode == octa_index(catalog));
  for (int c = 1; c < 4; ++c) CHECK(boundary.corners[c].mode == poly_index(catalog));

  // Opposite pairs of boundary edges belong to the same one-dimensional
  // classes: the cluster-to-cluster transition paths with published lengths
  // 0.627 (adjacent to the octahedron) and 0.946 (between the others).
  const double expect[4] = {0.627, 0.946, 0.946, 0.627};
  for (int e = 0; e < 4; ++e)
    CHECK(std::abs(boundary.edges[e].length - expect[e]) < 0.02 * expect[e] + 0.01);

  // Each boundary edge is a genuine line manifold: same constraint count and
  // matching endpoints, with corner geometry consistent at machine scale.
  for (int e = 0; e < 4; ++e) {
    const FaceEdge& edge = boundary.edges[e];
    REQUIRE(edge.samples.size() >= 2);
    const Configuration& far = edge.samples.back().x;
    const Configuration& corner = boundary.corners[(e + 1) % 4].x;
    CHECK(quotient_distance(far, corner) < 1e-8);
    CHECK(std::abs(bond_excess(far, boundary.corners[(e + 1) % 4].extra_new)) < 1e-8);
  }
}

TEST_CASE("boundary edges are the line classes of the transition catalog") {
  ModeCatalog catalog = standard_catalog(6);
  LineCatalog lines = build_line_catalog(catalog);
  auto [b1, b2] = four_corner_pair(catalog);
  FaceBoundary boundary = trace_boundary(catalog, octa_index(catalog), b1, b2);

  std::vector<double> matched_lengths;
  for (const FaceEdge& edge : boundary.edges) {
    // The walk's active set is the face bonds plus the edge's kept bond.
    ConstraintSet edge_bonds;
    for (const Bond& x : boundary.corners[0].graph.bonds())
      if (!(x == b1) && !(x == b2)) edge_bonds.push_back(x);
    edge_bonds.push_back(edge.kept);
    ContactGraph interior = ContactGraph::from_bonds(6, sorted_bonds(edge_bonds));

    bool found = false;
    for (const LineClass& cls : lines.classes) {
      ContactGraph cls_interior =
          ContactGraph::from_bonds(6, cls.representative.bonds);
      if (!isomorphism(interior, cls_interior)) continue;
      found = true;
      matched_lengths.push_back(cls.representative.length);
      break;
    }
    CHECK_MESSAGE(found, "boundary edge has no matching line class");
  }
  REQUIRE(matched_lengths.size() == 4);
  for (int e = 0; e < 4; ++e)
    CHECK(std::abs(matched_lengths[e] - boundary.edges[e].length) <
          0.02 * matched_lengths[e] + 0.01);
}

TEST_CASE("the four-corner face reproduces the published integrals") {
  ModeCatalog catalog = standard_catalog(6);
  const FaceManifold& face = four_corner_face(catalog);

  CHECK(face.boundary.corners.size() == 4);
  CHECK(euler_characteristic(face) == 1);
  CHECK(face.points.size() > 100);
  CHECK(face.triangles.size() > 100);

  // Published surface data for the face pictured in the flattened-manifold
  // figure (corners octahedron + three polytetrahedra, boundary edges
  // 7,5,5,7): S = 0.59, hbar = 0.054, Ibar = 3.27, z = n * zeta = 37.56
  // with n = 360.
  CHECK(std::abs(face.area - 0.59) < 0.05 * 0.59);
  CHECK(std::abs(face.hbar - 0.054) < 0.05 * 0.054);
  CHECK(std::abs(face.ibar - 3.27) < 0.05 * 3.27);
  CHECK(std::abs(360.0 * face.zeta - 37.56) < 0.05 * 37.56);

  // Quadrature consistency: integrating 1 gives the area, integrating h*I
  // gives zeta, and the stored averages match their integrals.
  CHECK(fem_integrate(face, [](double, double) { return 1.0; }) ==
        doctest::Approx(face.area).epsilon(1e-12));
  CHECK(fem_integrate(face, [](double h, double i) { return h * i; }) ==
        doctest::Approx(face.zeta).epsilon(1e-12));
  CHECK(fem_integrate(face, [](double h, double) { return h; }) / face.area ==
        doctest::Approx(face.hbar).epsilon(1e-12));
}

TEST_CASE("face samples sit on the face and nowhere else") {
  ModeCatalog catalog = standard_catalog(6);
  const FaceManifold& face = four_corner_face(catalog);

  REQUIRE(face.bonds.size() == 10);  // 3n - 8 for n = 6
  int interior_count = 0;
  for (const FacePoint& p : face.points) {
    CHECK(excess_vector(p.x, face.bonds).lpNorm<Eigen::Infinity>() < 1e-9);
    double worst = 1.0;
    for (int i = 0; i < 6; ++i) {
      for (int j = i + 1; j < 6; ++j) {
        Bond b{i, j};
        if (std::binary_search(face.bonds.begin(), face.bonds.end(), b)) continue;
        worst = std::min(worst, bond_excess(p.x, b));
      }
    }
    CHECK(worst > -1e-8);  // never exits the face, never overlaps
    if (p.kind == FacePoint::interior) ++interior_count;
  }
  CHECK(interior_count > 50);

  // Interior points respect the half-step crowding radius at creation; the
  // spring smoothing may squeeze pairs somewhat, but never into pile-ups.
  double closest = 1.0;
  for (size_t a = 0; a < face.points.size(); ++a)
    for (size_t b = a + 1; b < face.points.size(); ++b)
      closest =
          std::min(closest, (face.points[a].embedding - face.points[b].embedding).norm());
  CHECK(closest > 0.1 * 0.05);

  // Every mesh vertex belongs to a triangle and every area is finite.
  REQUIRE(face.tri_areas.size() == face.triangles.size());
  for (double a : face.tri_areas) {
    CHECK(std::isfinite(a));
    CHECK(a >= 0.0);
  }
  CHECK(face.min_quality >= 0.0);
}

TEST_CASE("halving the sampling step moves the integrals by under two percent") {
  ModeCatalog catalog = standard_catalog(6);
  const FaceManifold& coarse = four_corner_face(catalog);
  auto [b1, b2] = four_corner_pair(catalog);
  FaceOptions fine_options;
  fine_options.ds = 0.025;
  FaceManifold fine = build_face(catalog, octa_index(catalog), b1, b2, fine_options);

  CHECK(std::abs(fine.area - coarse.area) < 0.02 * coarse.area);
  CHECK(std::abs(fine.zeta - coarse.zeta) < 0.02 * coarse.zeta);
}

TEST_CASE("five-sphere census: four face classes with forced multiplicities") {
  ModeCatalog catalog = standard_catalog(5);
  FaceCatalog faces = build_face_catalog(catalog);

  CHECK(faces.failed_pairs == 0);
  REQUIRE(faces.classes.size() == 4);

  // Every face boundary is a three-corner loop whose corner slots carry the
  // three distinct pairs of watched contacts, so each labeled copy absorbs
  // exactly three of the 10 * 36 breaking incidences: n = 10 * nu / 3.  The
  // per-class weights are frozen from a step-halving study (ds 0.05 -> 0.025
  // moved each area by less than 0.5%).
  struct Row {
    long n;
    int nu;
    double zeta;
  };
  const std::vector<Row> expected{
      {30, 9, 0.13762}, {60, 18, 0.56145}, {10, 3, 0.30077}, {20, 6, 0.81871}};

  int nu_total = 0;
  double z2 = 0.0;
  std::vector<bool> used(expected.size(), false);
  for (const FaceClass& cls : faces.classes) {
    CHECK(cls.corner_modes.size() == 3);
    CHECK(euler_characteristic(cls.representative) == 1);
    int nu = 0;
    for (const auto& [mode, count] : cls.nu) nu += count;
    CHECK(cls.multiplicity == 10 * nu / 3);
    nu_total += nu;
    z2 += static_cast<double>(cls.multiplicity) * cls.representative.zeta;

    bool matched = false;
    for (size_t r = 0; r < expected.size(); ++r) {
      if (used[r] || expected[r].n != cls.multiplicity || expected[r].nu != nu) continue;
      CHECK(std::abs(cls.representative.zeta - expected[r].zeta) < 0.02 * expected[r].zeta);
      used[r] = true;
      matched = true;
      break;
    }
    CHECK_MESSAGE(matched, "face class has no expected (multiplicity, nu) row");
  }
  // All C(9,2) = 36 ways of opening two bipyramid contacts land on a class.
  CHECK(nu_total == 36);
  CHECK(std::abs(z2 - 57.20) < 0.02 * 57.20);
}

TEST_CASE("five-sphere census: graph-merged breakings build congruent faces") {
  // Two breakings whose interiors are isomorphic graphs must sample the same
  // geometry; the census relies on this when it pools their incidence counts.
  ModeCatalog catalog = standard_catalog(5);
  const ConstraintSet bonds = catalog.rigid[0].graph.bonds();
  int ap1 = -1, ap2 = -1;
  for (int i = 0; i < 5 && ap1 < 0; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (!std::binary_search(bonds.begin(), bonds.end(), Bond{i, j})) {
        ap1 = i;
        ap2 = j;
      }
  std::vector<int> eq;
  for (int v = 0; v < 5; ++v)
    if (v != ap1 && v != ap2) eq.push_back(v);
  const auto mk = [](int i, int j) { return Bond{std::min(i, j), std::max(i, j)}; };

  // Opening two equatorial contacts versus one equatorial plus the disjoint
  // apex contact: isomorphic interiors, and the builds must agree.
  FaceManifold a = build_face(catalog, 0, mk(eq[0], eq[1]), mk(eq[0], eq[2]));
  FaceManifold b = build_face(catalog, 0, mk(eq[0], eq[1]), mk(eq[2], ap1));
  CHECK(std::abs(a.area - b.area) < 0.01 * a.area + 0.005);
  CHECK(std::abs(a.hbar - b.hbar) < 0.01 * a.hbar);
  CHECK(std::abs(a.ibar - b.ibar) < 0.01 * a.ibar);
}

TEST_CASE("six-sphere census: thirteen face classes matching the published table") {
  ModeCatalog catalog = standard_catalog(6);
  FaceCatalog faces = build_face_catalog(catalog);
  const int octa = octa_index(catalog);
  const int poly = poly_index(catalog);

  CHECK(faces.failed_pairs == 0);
  REQUIRE(faces.classes.size() == 13);

  // The published per-mode table, keyed by (corner count, multiplicity,
  // octahedron among the corners) which identifies every row uniquely.
  struct Row {
    int corners;
    long n;
    bool has_octa;
    double hbar, ibar, S, z;
  };
  const std::vector<Row> published{
      {3, 180, false, 0.075, 3.37, 0.35, 15.99}, {5, 360, false, 0.075, 3.76, 2.00, 202.45},
      {4, 180, false, 0.083, 4.01, 2.17, 130.10}, {4, 360, false, 0.064, 3.53, 1.07, 87.44},
      {3, 180, true, 0.057, 3.17, 0.23, 7.52},    {6, 360, false, 0.073, 3.79, 2.84, 284.23},
      {3, 90, true, 0.055, 3.17, 0.24, 3.76},     {5, 72, false, 0.064, 3.56, 1.55, 25.33},
      {3, 360, false, 0.067, 3.48, 0.64, 53.23},  {5, 360, true, 0.063, 3.59, 1.58, 129.53},
      {4, 360, true, 0.054, 3.27, 0.59, 37.56},   {3, 120, false, 0.081, 4.07, 2.67, 105.52},
      {4, 90, false, 0.072, 3.77, 2.39, 57.97}};

  double z2 = 0.0;
  for (const Row& row : published) {
    const FaceClass* match = nullptr;
    for (const FaceClass& cls : faces.classes) {
      const bool has_octa =
          std::count(cls.corner_modes.begin(), cls.corner_modes.end(), octa) > 0;
      if (static_cast<int>(cls.corner_modes.size()) == row.corners &&
          cls.multiplicity == row.n && has_octa == row.has_octa) {
        REQUIRE_MESSAGE(match == nullptr, "published row matched twice");
        match = &cls;
      }
    }
    REQUIRE_MESSAGE(match != nullptr, "published row has no matching face class");
    CHECK(std::abs(match->representative.area - row.S) < 0.05 * row.S + 0.005);
    CHECK(std::abs(match->representative.hbar - row.hbar) < 0.05 * row.hbar);
    CHECK(std::abs(match->representative.ibar - row.ibar) < 0.05 * row.ibar);
    const double z = static_cast<double>(match->multiplicity) * match->representative.zeta;
    CHECK(std::abs(z - row.z) < 0.05 * row.z);
    CHECK(euler_characteristic(match->representative) == 1);
    z2 += z;

    // The figure face: adjacency counts against the bonds-to-break appendix.
    if (row.corners == 4 && row.has_octa) {
      CHECK(match->nu.at(octa) == 24);
      CHECK(match->nu.at(poly) == 6);
    }
    // The five-corner face with an octahedron corner is reached from both
    // rigid modes; counts again from the bonds-to-break appendix.
    if (row.corners == 5 && row.has_octa) {
      CHECK(match->nu.at(octa) == 24);
      CHECK(match->nu.at(poly) == 8);
    }
  }
  CHECK(std::abs(z2 - 1140.0) < 0.05 * 1140.0);

  // Every (mode, pair) choice lands somewhere: 2 modes x C(12,2) pairs.
  int total_nu = 0;
  for (const FaceClass& cls : faces.classes)
    for (const auto& [mode, count] : cls.nu) total_nu += count;
  CHECK(total_nu == 2 * 66);
}
