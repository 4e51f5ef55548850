#include "core/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/geometry.hpp"

namespace sticky {

CommittorProfile committor(const LineManifold& line) {
  if (line.samples.size() < 2)
    throw InconsistentInput("committor needs at least two samples");
  CommittorProfile out;
  out.s.reserve(line.samples.size());
  out.q.reserve(line.samples.size());
  double cumulative = 0.0;
  double prev_w = 0.0;
  for (size_t k = 0; k < line.samples.size(); ++k) {
    const PathSample& sample = line.samples[k];
    const double hi = sample.h * sample.inertia;
    if (hi <= 0.0) throw SingularityError("line sample with non-positive h I");
    const double w = 1.0 / hi;
    if (k > 0) cumulative += 0.5 * (prev_w + w) * (sample.s - line.samples[k - 1].s);
    prev_w = w;
    out.s.push_back(sample.s);
    out.q.push_back(cumulative);
  }
  const double total = out.q.back();
  if (total <= 0.0) throw SingularityError("line has no barrier weight");
  for (double& q : out.q) q /= total;
  out.q.front() = 0.0;
  out.q.back() = 1.0;
  return out;
}

RateNetwork assemble_rates(const ModeCatalog& modes, const LineCatalog& lines,
                           double kappa, RateConvention convention) {
  if (modes.n != lines.n)
    throw InconsistentInput("mode and line catalogs disagree on sphere count");
  if (kappa <= 0.0) throw InconsistentInput("kappa must be positive");

  RateNetwork out;
  out.n = modes.n;
  out.convention = convention;
  out.kappa = kappa;
  const int m = static_cast<int>(modes.rigid.size());
  out.geometric = Mat::Zero(m, m);

  for (const RigidMode& mode : modes.rigid)
    out.z0 += static_cast<double>(mode.multiplicity) * mode.h * mode.inertia;
  if (out.z0 <= 0.0) throw InconsistentInput("rigid catalog carries no weight");

  for (const LineClass& cls : lines.classes) {
    out.z1 += static_cast<double>(cls.multiplicity) * cls.representative.zeta;
    const int a = cls.representative.start_mode;
    const int b = cls.representative.end_mode;
    if (a < 0 || b < 0 || a >= m || b >= m) {
      ++out.excluded_lines;
      continue;
    }
    const double q = cls.representative.q_integral;
    if (q <= 0.0) {
      ++out.excluded_lines;
      continue;
    }
    const double flux = static_cast<double>(cls.multiplicity) / q;
    if (a == b) {
      out.geometric(a, a) += 2.0 * flux;
    } else {
      out.geometric(a, b) += flux;
      out.geometric(b, a) += flux;
    }
  }

  double scale = 1.0 / out.z0;
  if (convention == RateConvention::restricted_network)
    scale /= 1.0 + out.z1 / (kappa * out.z0);
  out.geometric *= scale;
  return out;
}

std::vector<double> equilibrium_probabilities(const ModeCatalog& modes) {
  std::vector<double> pi;
  pi.reserve(modes.rigid.size());
  double z0 = 0.0;
  for (const RigidMode& mode : modes.rigid) {
    pi.push_back(static_cast<double>(mode.multiplicity) * mode.h * mode.inertia);
    z0 += pi.back();
  }
  if (z0 <= 0.0) throw InconsistentInput("rigid catalog carries no weight");
  for (double& p : pi) p /= z0;
  return pi;
}

double outgoing_rate(const RateNetwork& network, int a, int b,
                     const std::vector<double>& pi) {
  const int m = static_cast<int>(network.geometric.rows());
  if (a < 0 || b < 0 || a >= m || b >= m)
    throw InconsistentInput("mode index outside the network");
  if (static_cast<int>(pi.size()) != m)
    throw InconsistentInput("occupancy vector size mismatch");
  if (pi[static_cast<size_t>(a)] <= 0.0)
    throw InconsistentInput("outgoing rate needs positive occupancy");
  return network.geometric(a, b) / pi[static_cast<size_t>(a)];
}

double dimensional_rate(const RateNetwork& network, int a, int b, double diffusion,
                        double diameter) {
  const int m = static_cast<int>(network.geometric.rows());
  if (a < 0 || b < 0 || a >= m || b >= m)
    throw InconsistentInput("mode index outside the network");
  if (diffusion <= 0.0 || diameter <= 0.0)
    throw InconsistentInput("diffusion and diameter must be positive");
  return network.geometric(a, b) * diffusion /
         (network.kappa * diameter * diameter);
}

double expected_count(const RateNetwork& network, int a, int b, double duration,
                      double diffusion, double diameter) {
  if (duration < 0.0) throw InconsistentInput("duration must be non-negative");
  return dimensional_rate(network, a, b, diffusion, diameter) * duration;
}

double mode_separation(const Configuration& a, const Configuration& b) {
  if (a.n != b.n) throw InconsistentInput("separation needs equal sphere counts");
  const int n = a.n;
  const int npairs = n * (n - 1) / 2;
  const Vec ea = embed(a);
  const Vec eb = embed(b);

  std::vector<std::vector<int>> pair_index(static_cast<size_t>(n),
                                           std::vector<int>(static_cast<size_t>(n), -1));
  int c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pair_index[static_cast<size_t>(i)][static_cast<size_t>(j)] = c;
      pair_index[static_cast<size_t>(j)][static_cast<size_t>(i)] = c;
      ++c;
    }

  std::vector<int> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double d2 = 0.0;
    int k = 0;
    for (int i = 0; i < n && d2 < best; ++i) {
      for (int j = i + 1; j < n; ++j, ++k) {
        const size_t pi = static_cast<size_t>(perm[static_cast<size_t>(i)]);
        const size_t pj = static_cast<size_t>(perm[static_cast<size_t>(j)]);
        const double diff = ea[k] - eb[pair_index[pi][pj]];
        d2 += diff * diff;
      }
    }
    best = std::min(best, d2);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / npairs);
}

ModeGrouping group_near_modes(const ModeCatalog& catalog, double threshold) {
  const int m = static_cast<int>(catalog.rigid.size());
  std::vector<int> parent(static_cast<size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int v) {
    while (parent[static_cast<size_t>(v)] != v) {
      parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      v = parent[static_cast<size_t>(v)];
    }
    return v;
  };

  for (int a = 0; a + 1 < m; ++a) {
    for (int b = a + 1; b < m; ++b) {
      const double sep = mode_separation(catalog.rigid[static_cast<size_t>(a)].representative,
                                         catalog.rigid[static_cast<size_t>(b)].representative);
      if (sep < threshold) parent[static_cast<size_t>(find(a))] = find(b);
    }
  }

  ModeGrouping out;
  out.group_of.assign(static_cast<size_t>(m), -1);
  for (int v = 0; v < m; ++v) {
    const int root = find(v);
    if (out.group_of[static_cast<size_t>(root)] < 0) {
      out.group_of[static_cast<size_t>(root)] = static_cast<int>(out.members.size());
      out.members.emplace_back();
    }
    const int g = out.group_of[static_cast<size_t>(root)];
    out.group_of[static_cast<size_t>(v)] = g;
    out.members[static_cast<size_t>(g)].push_back(v);
  }
  return out;
}

RateNetwork grouped_rates(const RateNetwork& network, const ModeGrouping& grouping) {
  const int m = static_cast<int>(network.geometric.rows());
  if (static_cast<int>(grouping.group_of.size()) != m)
    throw InconsistentInput("grouping does not cover the network's modes");
  const int g = static_cast<int>(grouping.members.size());

  RateNetwork out = network;
  out.geometric = Mat::Zero(g, g);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const int ga = grouping.group_of[static_cast<size_t>(a)];
      const int gb = grouping.group_of[static_cast<size_t>(b)];
      if (ga == gb) continue;  // unobservable within a group
      out.geometric(ga, gb) += network.geometric(a, b);
    }
  }
  return out;
}

}  // namespace sticky
