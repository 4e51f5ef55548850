#include "core/clusters.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

#include "core/geometry.hpp"

namespace sticky {

namespace {

// Cost pieces for the realization solver: bond excesses plus a one-sided
// penalty pushing overlapping non-bonded pairs back out to unit distance.
constexpr double kOverlapWeight = 10.0;

struct ResidualSystem {
  const ContactGraph& graph;
  ConstraintSet bonds;
  std::vector<Bond> nonbonds;

  explicit ResidualSystem(const ContactGraph& g) : graph(g), bonds(g.bonds()) {
    for (int i = 0; i < g.n; ++i) {
      for (int j = i + 1; j < g.n; ++j) {
        if (!g.has_edge(i, j)) nonbonds.push_back({i, j});
      }
    }
  }

  Vec residuals(const Configuration& x) const {
    Vec r = Vec::Zero(static_cast<Eigen::Index>(bonds.size() + nonbonds.size()));
    Eigen::Index row = 0;
    for (const Bond& b : bonds) r(row++) = bond_excess(x, b);
    for (const Bond& b : nonbonds) {
      r(row++) = kOverlapWeight * std::min(0.0, bond_excess(x, b));
    }
    return r;
  }

  Mat jacobian(const Configuration& x) const {
    Mat jac = Mat::Zero(static_cast<Eigen::Index>(bonds.size() + nonbonds.size()), 3 * x.n);
    Eigen::Index row = 0;
    auto fill = [&](const Bond& b, double weight) {
      Vec3 diff = x.particle(b.i) - x.particle(b.j);
      double dist = diff.norm();
      if (dist < 1e-9) dist = 1e-9;
      Vec3 unit = weight * diff / dist;
      jac.block<1, 3>(row, 3 * b.i) = unit.transpose();
      jac.block<1, 3>(row, 3 * b.j) = -unit.transpose();
    };
    for (const Bond& b : bonds) fill(b, 1.0), ++row;
    for (const Bond& b : nonbonds) {
      if (bond_excess(x, b) < 0.0) fill(b, kOverlapWeight);
      ++row;
    }
    return jac;
  }
};

// Damped Gauss-Newton descent on |residuals|^2.
bool descend(const ResidualSystem& system, Configuration& x) {
  double damping = 1e-3;
  double cost = system.residuals(x).squaredNorm();
  for (int iter = 0; iter < 400; ++iter) {
    Vec r = system.residuals(x);
    if (r.lpNorm<Eigen::Infinity>() < 1e-8) return true;
    Mat jac = system.jacobian(x);
    Mat normal = jac.transpose() * jac;
    normal.diagonal().array() += damping;
    Vec step = normal.ldlt().solve(-jac.transpose() * r);
    Configuration trial = x;
    trial.coords += step;
    double trial_cost = system.residuals(trial).squaredNorm();
    if (trial_cost < cost) {
      x = trial;
      cost = trial_cost;
      damping = std::max(damping / 3.0, 1e-12);
    } else {
      damping *= 4.0;
      if (damping > 1e8) return false;
    }
  }
  return false;
}

double min_nonbond_excess(const Configuration& x, const ContactGraph& g) {
  double lowest = 1e9;
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (!g.has_edge(i, j)) {
        lowest = std::min(lowest, bond_excess(x, {i, j}));
      }
    }
  }
  return lowest;
}

// Optimal proper rotation aligning moved onto target (both centered);
// returns the RMSD of the fit.
double proper_fit_rmsd(const Mat& moved, const Mat& target) {
  Mat3 cross = moved.transpose() * target;
  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 vu = svd.matrixV() * svd.matrixU().transpose();
  Mat3 d = Mat3::Identity();
  d(2, 2) = vu.determinant() > 0 ? 1.0 : -1.0;
  Mat3 rot = svd.matrixV() * d * svd.matrixU().transpose();
  return std::sqrt((moved * rot.transpose() - target).rowwise().squaredNorm().mean());
}

Mat coordinate_matrix(const Configuration& x) {
  Mat coords(x.n, 3);
  for (int p = 0; p < x.n; ++p) coords.row(p) = x.particle(p).transpose();
  return coords;
}

long factorial(int n) {
  long f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

RigidMode build_mode(int id, const ContactGraph& graph, const Configuration& x,
                     MultiplicityConvention convention) {
  RigidMode mode;
  mode.id = id;
  mode.graph = graph;
  mode.representative = x;
  auto [sigma, chiral] = symmetry_number(x, graph);
  mode.sigma = sigma;
  mode.chiral = chiral;
  mode.multiplicity = rigid_multiplicity(graph.n, sigma, chiral, convention);
  mode.h = vibrational_factor(x, graph.bonds());
  mode.inertia = rotational_factor(x);
  return mode;
}

}  // namespace

Configuration realize(const ContactGraph& graph, unsigned seed, int max_restarts) {
  ResidualSystem system(graph);
  std::mt19937 rng(seed * 0x9e3779b9u + 12345u);
  std::normal_distribution<double> gauss(0.0, 0.8);
  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    Configuration x = make_configuration(graph.n);
    for (int c = 0; c < 3 * graph.n; ++c) x.coords(c) = gauss(rng);
    if (!descend(system, x)) continue;
    Configuration polished;
    try {
      polished = newton_project(x, system.bonds);
    } catch (const ProjectionFailure&) {
      continue;
    }
    if (min_nonbond_excess(polished, graph) < tol::clearance) continue;
    return polished;
  }
  throw UnrealizableGraph("no unit-distance realization found in " +
                          std::to_string(max_restarts) + " attempts");
}

bool is_rigid(const Configuration& x, const ContactGraph& graph) {
  return internal_tangents(x, graph.bonds()).cols() == 0;
}

std::pair<int, bool> symmetry_number(const Configuration& x, const ContactGraph& graph) {
  Configuration centered = recenter(x);
  Mat target = coordinate_matrix(centered);
  Mat mirrored = target;
  mirrored.col(2) *= -1.0;  // improper = reflection composed with a rotation

  int proper = 0;
  bool any_improper = false;
  for (const std::vector<int>& perm : automorphisms(graph)) {
    Mat permuted(x.n, 3);
    for (int v = 0; v < x.n; ++v) permuted.row(v) = target.row(perm[static_cast<size_t>(v)]);
    if (proper_fit_rmsd(permuted, target) < tol::superpose) ++proper;
    if (proper_fit_rmsd(permuted, mirrored) < tol::superpose) any_improper = true;
  }
  return {proper, !any_improper};
}

long rigid_multiplicity(int n, int sigma, bool chiral, MultiplicityConvention convention) {
  long group = chiral ? sigma : 2L * sigma;  // improper ops double the group
  if (group <= 0 || factorial(n) % group != 0) {
    throw InconsistentInput("symmetry group order " + std::to_string(group) +
                            " does not divide " + std::to_string(n) + "!");
  }
  long table = factorial(n) / group;
  return convention == MultiplicityConvention::table ? table : 2L * table;
}

ModeCatalog load_catalog(const std::string& path, MultiplicityConvention convention) {
  std::ifstream in(path);
  if (!in) throw MissingInput("cannot open catalog file: " + path);
  ModeCatalog catalog;
  catalog.convention = convention;
  catalog.source = "file:" + path;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    int n = -1, id = -1;
    ConstraintSet bonds;
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      if (token.rfind("n=", 0) == 0) {
        n = std::stoi(token.substr(2));
      } else if (token.rfind("id=", 0) == 0) {
        id = std::stoi(token.substr(3));
      } else if (token.rfind("bonds=", 0) == 0) {
        std::istringstream pairs(token.substr(6));
        std::string pair;
        while (std::getline(pairs, pair, ',')) {
          auto dash = pair.find('-');
          if (dash == std::string::npos) {
            throw InconsistentInput("malformed bond '" + pair + "' in " + path);
          }
          int i = std::stoi(pair.substr(0, dash));
          int j = std::stoi(pair.substr(dash + 1));
          if (i == j) throw InconsistentInput("self-bond in " + path);
          bonds.push_back({std::min(i, j), std::max(i, j)});
        }
      } else {
        throw InconsistentInput("unrecognized token '" + token + "' in " + path);
      }
    }
    if (n <= 0 || id < 0 || bonds.empty()) {
      throw InconsistentInput("incomplete catalog line: " + line);
    }
    for (const Bond& b : bonds) {
      if (b.i < 0 || b.j >= n) throw InconsistentInput("bond index out of range: " + line);
    }
    if (catalog.n == 0) catalog.n = n;
    if (catalog.n != n) throw InconsistentInput("mixed particle counts in " + path);
    if (static_cast<int>(bonds.size()) != 3 * n - 6) {
      throw InconsistentInput("rigid mode must have 3n-6 bonds: " + line);
    }
    ContactGraph graph = ContactGraph::from_bonds(n, sorted_bonds(bonds));
    Configuration x = realize(graph, static_cast<unsigned>(id) + 1u);
    if (!is_rigid(x, graph)) {
      throw InconsistentInput("catalog graph id=" + std::to_string(id) + " is not rigid");
    }
    catalog.rigid.push_back(build_mode(id, graph, x, convention));
  }
  if (catalog.rigid.empty()) throw InconsistentInput("catalog file is empty: " + path);
  return catalog;
}

void save_catalog(const ModeCatalog& catalog, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw MissingInput("cannot write catalog file: " + path);
  for (const RigidMode& mode : catalog.rigid) {
    out << "n=" << catalog.n << " id=" << mode.id << " bonds=";
    ConstraintSet bonds = mode.graph.bonds();
    for (size_t k = 0; k < bonds.size(); ++k) {
      out << (k ? "," : "") << bonds[k].i << "-" << bonds[k].j;
    }
    out << "\n";
  }
}

ModeCatalog enumerate_catalog(int n, MultiplicityConvention convention) {
  std::vector<Bond> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  const int pair_count = static_cast<int>(pairs.size());
  const int edges_needed = 3 * n - 6;

  // Lexicographic walk over all edge subsets of the right size, keeping
  // candidates that pass the cheap combinatorial filters, deduplicated up
  // to isomorphism via invariant-hash buckets.
  std::vector<int> choose(static_cast<size_t>(edges_needed));
  for (int k = 0; k < edges_needed; ++k) choose[static_cast<size_t>(k)] = k;
  std::unordered_map<std::uint64_t, std::vector<ContactGraph>> buckets;
  std::vector<ContactGraph> candidates;

  for (;;) {
    ContactGraph g = ContactGraph::empty(n);
    for (int k : choose) g.add_edge(pairs[static_cast<size_t>(k)].i, pairs[static_cast<size_t>(k)].j);
    bool plausible = true;
    for (int v = 0; v < n && plausible; ++v) {
      if (g.degree(v) < 3) plausible = false;  // a rigid sphere needs 3 contacts
    }
    if (plausible && is_connected(g) && maxwell_sparse(g)) {
      std::uint64_t key = invariant_hash(g);
      auto& bucket = buckets[key];
      bool fresh = true;
      for (const ContactGraph& seen : bucket) {
        if (isomorphism(seen, g)) {
          fresh = false;
          break;
        }
      }
      if (fresh) {
        bucket.push_back(g);
        candidates.push_back(g);
      }
    }

    // Advance the combination indices.
    int pos = edges_needed - 1;
    while (pos >= 0 && choose[static_cast<size_t>(pos)] == pair_count - edges_needed + pos) --pos;
    if (pos < 0) break;
    ++choose[static_cast<size_t>(pos)];
    for (int k = pos + 1; k < edges_needed; ++k) {
      choose[static_cast<size_t>(k)] = choose[static_cast<size_t>(k - 1)] + 1;
    }
  }

  ModeCatalog catalog;
  catalog.n = n;
  catalog.convention = convention;
  catalog.source = "enumerated";
  int next_id = 0;
  for (const ContactGraph& g : candidates) {
    Configuration x;
    try {
      x = realize(g, static_cast<unsigned>(next_id) + 17u);
    } catch (const UnrealizableGraph&) {
      continue;
    }
    if (!is_rigid(x, g)) continue;
    catalog.rigid.push_back(build_mode(next_id, g, x, convention));
    ++next_id;
  }
  return catalog;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("STICKY_DATA_DIR")) return env;
  return "data";
}

ModeCatalog standard_catalog(int n, MultiplicityConvention convention) {
  return load_catalog(default_data_dir() + "/rigid_n" + std::to_string(n) + ".txt", convention);
}

std::optional<int> find_mode(const ModeCatalog& catalog, const ContactGraph& graph) {
  for (size_t k = 0; k < catalog.rigid.size(); ++k) {
    if (isomorphism(catalog.rigid[k].graph, graph)) return static_cast<int>(k);
  }
  return std::nullopt;
}

}  // namespace sticky
