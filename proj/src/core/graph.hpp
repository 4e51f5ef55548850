#pragma once

// Contact graphs on up to 32 vertices with bitmask adjacency rows, plus the
// combinatorics the cluster catalog needs: connectivity, sparsity counting,
// isomorphism, automorphisms, and a cheap isomorphism-invariant fingerprint
// for bucketing during enumeration.

#include <cstdint>
#include <optional>
#include <vector>

#include "core/types.hpp"

namespace sticky {

struct ContactGraph {
  int n = 0;
  std::vector<std::uint32_t> rows;  // bit j of rows[i] set iff i~j

  static ContactGraph empty(int n) {
    ContactGraph g;
    g.n = n;
    g.rows.assign(static_cast<size_t>(n), 0u);
    return g;
  }
  static ContactGraph from_bonds(int n, const ConstraintSet& bonds) {
    ContactGraph g = empty(n);
    for (const Bond& b : bonds) g.add_edge(b.i, b.j);
    return g;
  }

  bool has_edge(int i, int j) const { return (rows[static_cast<size_t>(i)] >> j) & 1u; }
  void add_edge(int i, int j) {
    rows[static_cast<size_t>(i)] |= 1u << j;
    rows[static_cast<size_t>(j)] |= 1u << i;
  }
  void remove_edge(int i, int j) {
    rows[static_cast<size_t>(i)] &= ~(1u << j);
    rows[static_cast<size_t>(j)] &= ~(1u << i);
  }
  int degree(int i) const { return __builtin_popcount(rows[static_cast<size_t>(i)]); }
  int edge_count() const {
    int total = 0;
    for (int i = 0; i < n; ++i) total += degree(i);
    return total / 2;
  }
  ConstraintSet bonds() const {
    ConstraintSet out;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (has_edge(i, j)) out.push_back({i, j});
      }
    }
    return out;
  }

  friend bool operator==(const ContactGraph&, const ContactGraph&) = default;
};

// Graph of all pairs closer than `cutoff` in the given configuration.
ContactGraph contacts_within(const Configuration& x, double cutoff);

bool is_connected(const ContactGraph& g);

// True when every induced subgraph on k = 4..n-1 vertices spans at most
// 3k-6 edges: the counting condition a generically rigid unit-bar framework
// in three dimensions must satisfy on all of its parts.
bool maxwell_sparse(const ContactGraph& g);

// Lexicographically least vertex permutation p with a[i][j] == b[p[i]][p[j]],
// or nullopt if the graphs are not isomorphic.
std::optional<std::vector<int>> isomorphism(const ContactGraph& a, const ContactGraph& b);

// All automorphisms (backtracking with degree pruning; identity included).
std::vector<std::vector<int>> automorphisms(const ContactGraph& g);

// Equal for isomorphic graphs; collisions between non-isomorphic graphs are
// resolved by a full isomorphism test within a bucket.
std::uint64_t invariant_hash(const ContactGraph& g);

}  // namespace sticky
