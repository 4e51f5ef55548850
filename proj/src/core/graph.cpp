#include "core/graph.hpp"

#include <algorithm>
#include <array>

namespace sticky {

ContactGraph contacts_within(const Configuration& x, double cutoff) {
  ContactGraph g = ContactGraph::empty(x.n);
  for (int i = 0; i < x.n; ++i) {
    for (int j = i + 1; j < x.n; ++j) {
      if ((x.particle(i) - x.particle(j)).norm() < cutoff) g.add_edge(i, j);
    }
  }
  return g;
}

bool is_connected(const ContactGraph& g) {
  if (g.n == 0) return true;
  std::uint32_t reached = 1u;
  std::uint32_t all = (g.n == 32) ? ~0u : ((1u << g.n) - 1u);
  for (;;) {
    std::uint32_t next = reached;
    std::uint32_t frontier = reached;
    while (frontier) {
      int v = __builtin_ctz(frontier);
      frontier &= frontier - 1;
      next |= g.rows[static_cast<size_t>(v)];
    }
    if (next == reached) break;
    reached = next;
  }
  return reached == all;
}

bool maxwell_sparse(const ContactGraph& g) {
  const std::uint32_t full = (1u << g.n) - 1u;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    int k = __builtin_popcount(mask);
    if (k < 4) continue;
    int edges = 0;
    std::uint32_t rest = mask;
    while (rest) {
      int v = __builtin_ctz(rest);
      rest &= rest - 1;
      edges += __builtin_popcount(g.rows[static_cast<size_t>(v)] & mask);
    }
    if (edges / 2 > 3 * k - 6) return false;
  }
  return true;
}

namespace {

// Depth-first extension of a partial vertex map a -> b, images tried in
// increasing order so the first complete map is lexicographically least.
bool extend_map(const ContactGraph& a, const ContactGraph& b, std::vector<int>& map,
                std::uint32_t used, int depth, std::vector<std::vector<int>>* collect) {
  if (depth == a.n) {
    if (collect) {
      collect->push_back(map);
      return false;  // keep searching for every automorphism
    }
    return true;
  }
  for (int img = 0; img < b.n; ++img) {
    if ((used >> img) & 1u) continue;
    if (a.degree(depth) != b.degree(img)) continue;
    bool ok = true;
    for (int prev = 0; prev < depth; ++prev) {
      if (a.has_edge(prev, depth) != b.has_edge(map[static_cast<size_t>(prev)], img)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    map[static_cast<size_t>(depth)] = img;
    if (extend_map(a, b, map, used | (1u << img), depth + 1, collect)) return true;
  }
  return false;
}

}  // namespace

std::optional<std::vector<int>> isomorphism(const ContactGraph& a, const ContactGraph& b) {
  if (a.n != b.n || a.edge_count() != b.edge_count()) return std::nullopt;
  std::vector<int> degrees_a(static_cast<size_t>(a.n)), degrees_b(static_cast<size_t>(b.n));
  for (int i = 0; i < a.n; ++i) {
    degrees_a[static_cast<size_t>(i)] = a.degree(i);
    degrees_b[static_cast<size_t>(i)] = b.degree(i);
  }
  std::sort(degrees_a.begin(), degrees_a.end());
  std::sort(degrees_b.begin(), degrees_b.end());
  if (degrees_a != degrees_b) return std::nullopt;

  std::vector<int> map(static_cast<size_t>(a.n), -1);
  if (extend_map(a, b, map, 0u, 0, nullptr)) return map;
  return std::nullopt;
}

std::vector<std::vector<int>> automorphisms(const ContactGraph& g) {
  std::vector<std::vector<int>> found;
  std::vector<int> map(static_cast<size_t>(g.n), -1);
  extend_map(g, g, map, 0u, 0, &found);
  return found;
}

std::uint64_t invariant_hash(const ContactGraph& g) {
  // Per-vertex signature: own degree plus the sorted multiset of neighbor
  // degrees and the number of triangles through the vertex. The multiset of
  // signatures is relabeling-invariant.
  std::vector<std::uint64_t> signatures;
  signatures.reserve(static_cast<size_t>(g.n));
  for (int v = 0; v < g.n; ++v) {
    std::array<int, 32> neighbor_degrees{};
    int count = 0;
    int triangles = 0;
    std::uint32_t nbrs = g.rows[static_cast<size_t>(v)];
    std::uint32_t rest = nbrs;
    while (rest) {
      int u = __builtin_ctz(rest);
      rest &= rest - 1;
      neighbor_degrees[static_cast<size_t>(count++)] = g.degree(u);
      triangles += __builtin_popcount(g.rows[static_cast<size_t>(u)] & nbrs);
    }
    std::sort(neighbor_degrees.begin(), neighbor_degrees.begin() + count);
    std::uint64_t sig = static_cast<std::uint64_t>(g.degree(v)) * 131 +
                        static_cast<std::uint64_t>(triangles);
    for (int k = 0; k < count; ++k) {
      sig = sig * 1000003u + static_cast<std::uint64_t>(neighbor_degrees[static_cast<size_t>(k)]);
    }
    signatures.push_back(sig);
  }
  std::sort(signatures.begin(), signatures.end());
  std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
  for (std::uint64_t s : signatures) {
    h ^= s;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sticky
