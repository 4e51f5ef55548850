#include "core/face.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "core/geometry.hpp"

namespace sticky {

namespace {

std::vector<Bond> all_pairs(int n) {
  std::vector<Bond> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({i, j});
  return out;
}

bool contains(const ConstraintSet& sorted, const Bond& b) {
  return std::binary_search(sorted.begin(), sorted.end(), b);
}

ConstraintSet with_bond(ConstraintSet bonds, const Bond& extra) {
  bonds.insert(std::upper_bound(bonds.begin(), bonds.end(), extra), extra);
  return bonds;
}

double min_watched_excess(const Configuration& x, const std::vector<Bond>& watched) {
  double m = std::numeric_limits<double>::infinity();
  for (const Bond& b : watched) m = std::min(m, bond_excess(x, b));
  return m;
}

// Numerically tame Heron area (Kahan ordering); 0 for failed triangle
// inequalities, which curved-metric edge lengths can produce on slivers.
double heron_area(double a, double b, double c) {
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  const double t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return t > 0.0 ? 0.25 * std::sqrt(t) : 0.0;
}

// 2 r_in / r_circ = (b+c-a)(c+a-b)(a+b-c) / (abc); 1 for equilateral.
double tri_quality(double a, double b, double c) {
  const double denom = a * b * c;
  if (denom <= 0.0) return 0.0;
  const double num = (b + c - a) * (c + a - b) * (a + b - c);
  return num > 0.0 ? num / denom : 0.0;
}

// ---------------------------------------------------------------------------
// Planar Delaunay triangulation (Bowyer-Watson with cached circumcircles).
// Degenerate triangles get an infinite circumradius, so the next insertion
// always removes them; they cannot survive and corrupt later cavities.
// ---------------------------------------------------------------------------

struct CircumTri {
  int a, b, c;
  double cx = 0.0, cy = 0.0;
  double rr = std::numeric_limits<double>::infinity();
};

CircumTri make_tri(int a, int b, int c, const std::vector<double>& px,
                   const std::vector<double>& py) {
  CircumTri t;
  t.a = a;
  t.b = b;
  t.c = c;
  const double ax = px[a], ay = py[a], bx = px[b], by = py[b], cx = px[c], cy = py[c];
  const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (std::abs(d) < 1e-30) return t;  // collinear: rr stays infinite
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  t.cx = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
  t.cy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
  const double dx = ax - t.cx, dy = ay - t.cy;
  t.rr = dx * dx + dy * dy;
  return t;
}

std::vector<std::array<int, 3>> delaunay_triangulate(const std::vector<double>& us,
                                                     const std::vector<double>& vs) {
  const int n = static_cast<int>(us.size());
  if (n < 3) throw NumericError("triangulation needs at least three points");
  std::vector<double> px(us), py(vs);
  px.insert(px.end(), {-1e3, 1e3, 0.0});
  py.insert(py.end(), {-1e3, -1e3, 1e3});
  std::vector<CircumTri> tris{make_tri(n, n + 1, n + 2, px, py)};
  for (int p = 0; p < n; ++p) {
    const double x = px[p], y = py[p];
    std::vector<CircumTri> keep;
    keep.reserve(tris.size() + 4);
    std::map<std::pair<int, int>, int> cavity;
    for (const CircumTri& t : tris) {
      const double dx = x - t.cx, dy = y - t.cy;
      if (dx * dx + dy * dy <= t.rr) {
        ++cavity[std::minmax(t.a, t.b)];
        ++cavity[std::minmax(t.b, t.c)];
        ++cavity[std::minmax(t.c, t.a)];
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [edge, count] : cavity)
      if (count == 1) keep.push_back(make_tri(edge.first, edge.second, p, px, py));
    tris = std::move(keep);
  }

  std::vector<std::array<int, 3>> out;
  for (const CircumTri& t : tris) {
    if (t.a >= n || t.b >= n || t.c >= n) continue;  // touches the outer frame
    const double area2 = (px[t.b] - px[t.a]) * (py[t.c] - py[t.a]) -
                         (px[t.c] - px[t.a]) * (py[t.b] - py[t.a]);
    if (std::abs(area2) < 1e-14) continue;
    out.push_back({t.a, t.b, t.c});
  }

  if (static_cast<int>(out.size()) > 2 * n)
    throw NumericError("triangulation produced more triangles than a planar disk allows");
  std::map<std::pair<int, int>, int> shared;
  std::vector<char> used(n, 0);
  for (const auto& t : out) {
    used[t[0]] = used[t[1]] = used[t[2]] = 1;
    if (++shared[std::minmax(t[0], t[1])] > 2 || ++shared[std::minmax(t[1], t[2])] > 2 ||
        ++shared[std::minmax(t[2], t[0])] > 2)
      throw NumericError("triangulation edge shared by more than two triangles");
  }
  if (std::find(used.begin(), used.end(), 0) != used.end())
    throw NumericError("triangulation dropped a sample point");
  return out;
}

// ---------------------------------------------------------------------------
// Mesh bookkeeping shared by the relaxation loop.
// ---------------------------------------------------------------------------

struct MeshScratch {
  // Per boundary edge: point indices in order corner -> samples -> next corner.
  std::vector<std::vector<int>> edge_points;
  std::vector<double> edge_totals;  // current bond-space length of each edge
};

// Recompute each boundary point's arc position (and the edge totals) as
// cumulative bond-space distance along the stored order; relaxation slides
// boundary points, so the traced arc lengths go stale.
void refresh_edge_positions(FaceManifold& face, MeshScratch& scratch) {
  for (size_t e = 0; e < scratch.edge_points.size(); ++e) {
    const std::vector<int>& seq = scratch.edge_points[e];
    double cum = 0.0;
    for (size_t k = 1; k < seq.size(); ++k) {
      cum += (face.points[seq[k]].embedding - face.points[seq[k - 1]].embedding).norm();
      if (k + 1 < seq.size()) face.points[seq[k]].s = cum;
    }
    scratch.edge_totals[e] = cum;
  }
}

// Convex-combination (mean value style) parameterization: the boundary loop
// goes on the unit circle, one uniform angular sector per edge, positions
// within a sector proportional to arc length; interior points solve a convex
// averaging system over their nearest neighbors in bond space. A deterministic
// sub-1e-7 inward radius stagger breaks exact cocircularity, which would
// otherwise make every boundary-only circumcircle test a coin flip.
void parameterize(FaceManifold& face, const MeshScratch& scratch, int k_start) {
  const int corners = static_cast<int>(face.boundary.corners.size());
  const double sector = 2.0 * M_PI / corners;
  std::vector<int> interior;
  for (size_t i = 0; i < face.points.size(); ++i) {
    FacePoint& p = face.points[i];
    double theta = 0.0;
    if (p.kind == FacePoint::corner) {
      theta = sector * p.edge;
    } else if (p.kind == FacePoint::boundary) {
      const double total = scratch.edge_totals[p.edge];
      theta = sector * (p.edge + (total > 0.0 ? p.s / total : 0.5));
    } else {
      interior.push_back(static_cast<int>(i));
      continue;
    }
    const double r = 1.0 - 1e-7 * ((i % 97) + 1) / 97.0;
    p.u = r * std::cos(theta);
    p.v = r * std::sin(theta);
  }
  if (interior.empty()) return;

  const int ni = static_cast<int>(interior.size());
  std::vector<int> row(face.points.size(), -1);
  for (int r = 0; r < ni; ++r) row[interior[r]] = r;

  for (int k = k_start, attempt = 0; attempt < 3; ++attempt, k += 4) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(ni) * (k + 1));
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(ni, 2);
    for (int r = 0; r < ni; ++r) {
      const int i = interior[r];
      trips.emplace_back(r, r, 1.0);
      std::vector<std::pair<double, int>> near;
      near.reserve(face.points.size());
      for (size_t j = 0; j < face.points.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        near.emplace_back((face.points[i].embedding - face.points[j].embedding).norm(),
                          static_cast<int>(j));
      }
      const size_t kk = std::min<size_t>(k, near.size());
      std::partial_sort(near.begin(), near.begin() + kk, near.end());
      double wsum = 0.0;
      for (size_t t = 0; t < kk; ++t) wsum += 1.0 / std::max(near[t].first, 1e-9);
      for (size_t t = 0; t < kk; ++t) {
        const double w = 1.0 / std::max(near[t].first, 1e-9) / wsum;
        const int j = near[t].second;
        if (row[j] >= 0) {
          trips.emplace_back(r, row[j], -w);
        } else {
          rhs(r, 0) += w * face.points[j].u;
          rhs(r, 1) += w * face.points[j].v;
        }
      }
    }
    Eigen::SparseMatrix<double> A(ni, ni);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) continue;
    const Eigen::MatrixXd uv = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !uv.allFinite()) continue;
    for (int r = 0; r < ni; ++r) {
      face.points[interior[r]].u = uv(r, 0);
      face.points[interior[r]].v = uv(r, 1);
    }
    return;
  }
  throw NumericError("interior parameterization system stayed singular");
}

std::vector<std::pair<int, int>> mesh_edges(const std::vector<std::array<int, 3>>& tris) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : tris) {
    edges.insert(std::minmax(t[0], t[1]));
    edges.insert(std::minmax(t[1], t[2]));
    edges.insert(std::minmax(t[2], t[0]));
  }
  return {edges.begin(), edges.end()};
}

double bond_space_mesh_area(const FaceManifold& face, const std::vector<std::array<int, 3>>& tris) {
  double area = 0.0;
  for (const auto& t : tris) {
    const double a = (face.points[t[0]].embedding - face.points[t[1]].embedding).norm();
    const double b = (face.points[t[1]].embedding - face.points[t[2]].embedding).norm();
    const double c = (face.points[t[2]].embedding - face.points[t[0]].embedding).norm();
    area += heron_area(a, b, c);
  }
  return area;
}

double bond_space_min_quality(const FaceManifold& face,
                              const std::vector<std::array<int, 3>>& tris) {
  double q = 1.0;
  for (const auto& t : tris) {
    const double a = (face.points[t[0]].embedding - face.points[t[1]].embedding).norm();
    const double b = (face.points[t[1]].embedding - face.points[t[2]].embedding).norm();
    const double c = (face.points[t[2]].embedding - face.points[t[0]].embedding).norm();
    q = std::min(q, tri_quality(a, b, c));
  }
  return q;
}

// One round of repulsive spring smoothing: rest length from the current mean
// mesh edge, force magnitudes from bond-space shortfalls, displacement along
// the ambient separation, every move re-projected onto the point's constraint
// set and reverted if projection fails or the point leaves the face.
void spring_steps(FaceManifold& face, const std::vector<std::array<int, 3>>& tris,
                  const FaceOptions& opt, const std::vector<ConstraintSet>& proj,
                  const std::vector<std::vector<Bond>>& watched) {
  const std::vector<std::pair<int, int>> edges = mesh_edges(tris);
  if (edges.empty()) return;
  double mean = 0.0;
  for (const auto& [a, b] : edges)
    mean += (face.points[a].embedding - face.points[b].embedding).norm();
  mean /= static_cast<double>(edges.size());
  const double rest = opt.pressure * mean;

  const Eigen::Index dim = face.points.front().x.coords.size();
  for (int it = 0; it < 3; ++it) {
    std::vector<Vec> force(face.points.size(), Vec::Zero(dim));
    for (const auto& [a, b] : edges) {
      const double len = (face.points[a].embedding - face.points[b].embedding).norm();
      const double mag = rest - len;
      if (mag <= 0.0) continue;
      Vec dir = face.points[a].x.coords - face.points[b].x.coords;
      const double dn = dir.norm();
      if (dn < 1e-12) continue;
      dir *= mag / dn;
      force[a] += dir;
      force[b] -= dir;
    }
    for (size_t i = 0; i < face.points.size(); ++i) {
      FacePoint& p = face.points[i];
      if (p.kind == FacePoint::corner || force[i].isZero(0.0)) continue;
      Configuration moved = p.x;
      moved.coords += opt.dt * force[i];
      Configuration trial;
      try {
        trial = newton_project(moved, proj[i]);
      } catch (const ProjectionFailure&) {
        continue;
      }
      if (min_watched_excess(trial, watched[i]) < -1e-9) continue;  // left the face
      p.x = trial;
      p.embedding = embed(trial);
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Boundary tracing.
// ---------------------------------------------------------------------------

FaceBoundary trace_boundary(const ModeCatalog& catalog, int mode_index, const Bond& first,
                            const Bond& second, double ds, int max_edges) {
  const RigidMode& mode = catalog.rigid.at(mode_index);
  if (first == second) throw InconsistentInput("face needs two distinct bonds to break");
  if (!mode.graph.has_edge(first.i, first.j) || !mode.graph.has_edge(second.i, second.j))
    throw InconsistentInput("bond to break is not present in the rigid mode");

  ConstraintSet face_bonds;
  for (const Bond& b : mode.graph.bonds())
    if (!(b == first) && !(b == second)) face_bonds.push_back(b);

  FaceBoundary out;
  FaceCorner start;
  start.graph = mode.graph;
  start.mode = mode_index;
  start.x = mode.representative;
  start.extra_old = first;
  start.extra_new = second;
  out.corners.push_back(start);

  for (int e = 0; e < max_edges; ++e) {
    const FaceCorner& cur = out.corners.back();
    const Bond opened = cur.extra_old;
    const Bond kept = cur.extra_new;
    const ConstraintSet edge_bonds = with_bond(face_bonds, kept);
    Walk walk = walk_one_dim(cur.x, edge_bonds, opened, ds);

    FaceCorner next;
    next.graph = ContactGraph::from_bonds(cur.x.n, with_bond(edge_bonds, walk.formed));
    next.x = walk.samples.back().x;
    next.extra_old = kept;
    next.extra_new = walk.formed;

    FaceEdge edge;
    edge.kept = kept;
    edge.opened = opened;
    edge.length = walk.length;
    edge.samples = std::move(walk.samples);
    out.edges.push_back(std::move(edge));

    if (next.graph == start.graph && next.extra_old == start.extra_old &&
        next.extra_new == start.extra_new)
      return out;  // back at the start corner, about to repeat the first edge

    const std::optional<int> found = find_mode(catalog, next.graph);
    if (!found) {
      if (is_rigid(next.x, next.graph))
        throw InconsistentInput("boundary corner is a rigid cluster missing from the catalog");
      throw SingularityError("boundary corner is not a regular rigid cluster");
    }
    next.mode = *found;
    out.corners.push_back(std::move(next));
  }
  throw TopologyError("face boundary failed to close within the edge budget");
}

// ---------------------------------------------------------------------------
// Full per-face pipeline.
// ---------------------------------------------------------------------------

FaceManifold build_face(const ModeCatalog& catalog, int mode_index, const Bond& first,
                        const Bond& second, const FaceOptions& options) {
  FaceManifold face;
  face.start_mode = mode_index;
  face.broken_first = std::min(first, second);
  face.broken_second = std::max(first, second);
  face.boundary = trace_boundary(catalog, mode_index, first, second, options.ds);

  const RigidMode& mode = catalog.rigid.at(mode_index);
  for (const Bond& b : mode.graph.bonds())
    if (!(b == first) && !(b == second)) face.bonds.push_back(b);

  // Corners first (point index == corner index), then the interior samples of
  // every edge in boundary order.
  MeshScratch scratch;
  const int corners = static_cast<int>(face.boundary.corners.size());
  for (int c = 0; c < corners; ++c) {
    FacePoint p;
    p.kind = FacePoint::corner;
    p.edge = c;
    p.x = face.boundary.corners[c].x;
    p.embedding = embed(p.x);
    face.points.push_back(std::move(p));
  }
  for (int e = 0; e < corners; ++e) {
    const FaceEdge& edge = face.boundary.edges[e];
    std::vector<int> seq{e};
    for (size_t k = 1; k + 1 < edge.samples.size(); ++k) {
      FacePoint p;
      p.kind = FacePoint::boundary;
      p.edge = e;
      p.s = edge.samples[k].s;
      p.x = edge.samples[k].x;
      p.embedding = embed(p.x);
      seq.push_back(static_cast<int>(face.points.size()));
      face.points.push_back(std::move(p));
    }
    seq.push_back((e + 1) % corners);
    scratch.edge_points.push_back(std::move(seq));
  }
  scratch.edge_totals.assign(corners, 0.0);

  // Interior sampling: Poisson-disk flood fill over the face. From every
  // point already accepted, try six evenly spread tangent directions; keep a
  // projected step when it stays strictly inside the face (every watched pair
  // clear of contact) and at least half a step from every existing sample.
  // One-shot transverse walks are not enough here: the faces are strongly
  // negatively curved (this kind of face can carry area 2.2 inside perimeter
  // 3.1), so straight crossings fan apart and leave the bulk unsampled.
  const std::vector<Bond> pairs = all_pairs(mode.representative.n);
  std::vector<Bond> watched_face;
  for (const Bond& b : pairs)
    if (!contains(face.bonds, b)) watched_face.push_back(b);

  std::deque<size_t> frontier;
  for (size_t i = 0; i < face.points.size(); ++i) frontier.push_back(i);
  while (!frontier.empty()) {
    const Configuration x = face.points[frontier.front()].x;
    frontier.pop_front();
    Mat tangent;
    try {
      tangent = internal_tangents(x, face.bonds, 2);
    } catch (const SingularityError&) {
      continue;
    }
    for (int k = 0; k < 6; ++k) {
      const double phi = 2.0 * M_PI * k / 6.0;
      Configuration moved = x;
      moved.coords +=
          options.ds * (std::cos(phi) * tangent.col(0) + std::sin(phi) * tangent.col(1));
      Configuration trial;
      try {
        trial = newton_project(moved, face.bonds);
      } catch (const ProjectionFailure&) {
        continue;
      }
      if (min_watched_excess(trial, watched_face) < 1e-6) continue;  // left the face
      const Vec emb = embed(trial);
      double nearest = std::numeric_limits<double>::infinity();
      for (const FacePoint& q : face.points)
        nearest = std::min(nearest, (emb - q.embedding).norm());
      if (nearest < 0.5 * options.ds) continue;
      FacePoint p;
      p.kind = FacePoint::interior;
      p.x = trial;
      p.embedding = emb;
      frontier.push_back(face.points.size());
      face.points.push_back(std::move(p));
    }
  }

  // Constraint set and face-membership watch list for every movable point.
  std::vector<ConstraintSet> proj(face.points.size());
  std::vector<std::vector<Bond>> watched(face.points.size());
  for (size_t i = 0; i < face.points.size(); ++i) {
    const FacePoint& p = face.points[i];
    if (p.kind == FacePoint::corner) continue;
    ConstraintSet set = face.bonds;
    if (p.kind == FacePoint::boundary) set = with_bond(set, face.boundary.edges[p.edge].kept);
    for (const Bond& b : pairs)
      if (!contains(set, b)) watched[i].push_back(b);
    proj[i] = std::move(set);
  }

  // Flatten / triangulate / relax until the bond-space mesh area settles
  // (three consecutive re-triangulations moving it less than ds/20).
  std::vector<double> history;
  std::vector<std::array<int, 3>> tris;
  const int cap = options.strict_quality ? 2 * options.max_rounds : options.max_rounds;
  int round = 0;
  for (;; ++round) {
    refresh_edge_positions(face, scratch);
    parameterize(face, scratch, options.neighbor_k);
    std::vector<double> us, vs;
    us.reserve(face.points.size());
    vs.reserve(face.points.size());
    for (const FacePoint& p : face.points) {
      us.push_back(p.u);
      vs.push_back(p.v);
    }
    tris = delaunay_triangulate(us, vs);
    history.push_back(bond_space_mesh_area(face, tris));

    bool settled = history.size() >= 4;
    if (settled)
      for (size_t k = history.size() - 3; k < history.size(); ++k)
        if (std::abs(history[k] - history[k - 1]) >= options.ds / 20.0) settled = false;
    if (settled && (!options.strict_quality || bond_space_min_quality(face, tris) > 0.2)) break;
    if (round >= cap) break;
    spring_steps(face, tris, options, proj, watched);
  }
  face.relax_rounds = round;
  face.triangles = std::move(tris);

  // Entropic weights at the final positions and quadrature in the quotient
  // metric: Heron areas from quotient edge lengths, vertex-averaged fields.
  for (FacePoint& p : face.points) {
    p.h = vibrational_factor(p.x, face.bonds);
    p.inertia = rotational_factor(p.x);
  }
  std::map<std::pair<int, int>, double> qlen;
  const auto quotient_edge = [&](int a, int b) {
    const std::pair<int, int> key = std::minmax(a, b);
    auto it = qlen.find(key);
    if (it == qlen.end())
      it = qlen.emplace(key, quotient_distance(face.points[a].x, face.points[b].x)).first;
    return it->second;
  };
  double sum_h = 0.0, sum_i = 0.0;
  face.min_quality = 1.0;
  for (const auto& t : face.triangles) {
    const double a = quotient_edge(t[0], t[1]);
    const double b = quotient_edge(t[1], t[2]);
    const double c = quotient_edge(t[2], t[0]);
    const double area = heron_area(a, b, c);
    face.tri_areas.push_back(area);
    face.min_quality = std::min(face.min_quality, tri_quality(a, b, c));
    double h = 0.0, inertia = 0.0, hi = 0.0;
    for (int v = 0; v < 3; ++v) {
      const FacePoint& p = face.points[t[v]];
      h += p.h;
      inertia += p.inertia;
      hi += p.h * p.inertia;
    }
    face.area += area;
    face.zeta += area * hi / 3.0;
    sum_h += area * h / 3.0;
    sum_i += area * inertia / 3.0;
  }
  if (face.area <= 0.0) throw NumericError("face integrated to zero area");
  face.hbar = sum_h / face.area;
  face.ibar = sum_i / face.area;
  face.strict_converged = face.min_quality > 0.2;
  return face;
}

double fem_integrate(const FaceManifold& face, const std::function<double(double, double)>& f) {
  if (face.triangles.size() != face.tri_areas.size())
    throw InconsistentInput("mesh areas out of step with triangles");
  double total = 0.0;
  for (size_t t = 0; t < face.triangles.size(); ++t) {
    double mean = 0.0;
    for (int v = 0; v < 3; ++v) {
      const FacePoint& p = face.points[face.triangles[t][v]];
      mean += f(p.h, p.inertia);
    }
    total += face.tri_areas[t] * mean / 3.0;
  }
  return total;
}

int euler_characteristic(const FaceManifold& face) {
  std::set<int> verts;
  std::set<std::pair<int, int>> edges;
  for (const auto& t : face.triangles) {
    verts.insert(t.begin(), t.end());
    edges.insert(std::minmax(t[0], t[1]));
    edges.insert(std::minmax(t[1], t[2]));
    edges.insert(std::minmax(t[2], t[0]));
  }
  return static_cast<int>(verts.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(face.triangles.size());
}

// ---------------------------------------------------------------------------
// Census over every (mode, bond pair).
// ---------------------------------------------------------------------------

FaceCatalog build_face_catalog(const ModeCatalog& catalog, const FaceOptions& options,
                               bool boundaries_only) {
  struct Pending {
    FaceBoundary boundary;
    ContactGraph interior;
    std::vector<int> corners_sorted;
    int mode;
    Bond b1, b2;
    std::map<int, int> nu;
  };
  std::vector<Pending> pending;

  FaceCatalog out;
  out.n = catalog.n;
  for (size_t mi = 0; mi < catalog.rigid.size(); ++mi) {
    const ConstraintSet bonds = catalog.rigid[mi].graph.bonds();
    for (size_t a = 0; a + 1 < bonds.size(); ++a) {
      for (size_t b = a + 1; b < bonds.size(); ++b) {
        FaceBoundary boundary;
        try {
          boundary = trace_boundary(catalog, static_cast<int>(mi), bonds[a], bonds[b],
                                    options.ds);
        } catch (const NumericError&) {
          ++out.failed_pairs;
          continue;
        }
        ConstraintSet face_bonds;
        for (const Bond& x : bonds)
          if (!(x == bonds[a]) && !(x == bonds[b])) face_bonds.push_back(x);
        ContactGraph interior = ContactGraph::from_bonds(catalog.n, face_bonds);
        std::vector<int> corners_sorted;
        for (const FaceCorner& c : boundary.corners)
          corners_sorted.push_back(c.mode < 0 ? static_cast<int>(mi) : c.mode);
        std::sort(corners_sorted.begin(), corners_sorted.end());

        bool matched = false;
        for (Pending& p : pending) {
          if (p.corners_sorted != corners_sorted) continue;
          if (!isomorphism(p.interior, interior)) continue;
          ++p.nu[static_cast<int>(mi)];
          matched = true;
          break;
        }
        if (!matched) {
          Pending p;
          p.boundary = std::move(boundary);
          p.interior = std::move(interior);
          p.corners_sorted = std::move(corners_sorted);
          p.mode = static_cast<int>(mi);
          p.b1 = bonds[a];
          p.b2 = bonds[b];
          p.nu[static_cast<int>(mi)] = 1;
          pending.push_back(std::move(p));
        }
      }
    }
  }

  for (Pending& p : pending) {
    FaceClass fc;
    fc.nu = p.nu;
    fc.multiplicity =
        floppy_multiplicity(catalog, p.nu, static_cast<int>(p.boundary.corners.size()));
    for (const FaceCorner& c : p.boundary.corners)
      fc.corner_modes.push_back(c.mode < 0 ? p.mode : c.mode);
    if (boundaries_only) {
      fc.representative.start_mode = p.mode;
      fc.representative.broken_first = std::min(p.b1, p.b2);
      fc.representative.broken_second = std::max(p.b1, p.b2);
      for (const Bond& x : catalog.rigid[p.mode].graph.bonds())
        if (!(x == p.b1) && !(x == p.b2)) fc.representative.bonds.push_back(x);
      fc.representative.boundary = std::move(p.boundary);
    } else {
      fc.representative = build_face(catalog, p.mode, p.b1, p.b2, options);
    }
    out.classes.push_back(std::move(fc));
  }
  return out;
}

std::vector<int> boundary_edge_classes(const FaceManifold& face,
                                       const LineCatalog& lines) {
  if (face.boundary.corners.empty())
    throw InconsistentInput("face has no traced boundary");
  const int n = face.boundary.corners.front().x.n;
  std::vector<ContactGraph> class_graphs;
  class_graphs.reserve(lines.classes.size());
  for (const LineClass& c : lines.classes)
    class_graphs.push_back(ContactGraph::from_bonds(n, c.representative.bonds));

  std::vector<int> out;
  out.reserve(face.boundary.edges.size());
  for (const FaceEdge& edge : face.boundary.edges) {
    ConstraintSet bonds = face.bonds;
    bonds.push_back(edge.kept);
    std::sort(bonds.begin(), bonds.end());
    const ContactGraph g = ContactGraph::from_bonds(n, bonds);
    int match = -1;
    for (size_t k = 0; k < class_graphs.size(); ++k) {
      if (isomorphism(g, class_graphs[k])) {
        match = static_cast<int>(k);
        break;
      }
    }
    out.push_back(match);
  }
  return out;
}

}  // namespace sticky
