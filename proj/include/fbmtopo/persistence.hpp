#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "fbmtopo/rips.hpp"

namespace fbmtopo {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct PersistencePair {
  double appear = 0.0;
  double disappear = kInfinity;  // +inf for essential classes
  bool essential = false;

  double lifespan() const noexcept { return disappear - appear; }
  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
  friend auto operator<=>(const PersistencePair& a, const PersistencePair& b) {
    if (auto c = a.appear <=> b.appear; c != 0) return c;
    return a.disappear <=> b.disappear;
  }
};

/// Pairs of one homology dimension, stored as a multiset.
///
/// H0 holds one pair per point: finite merges plus one essential pair per
/// component that survives to epsilon_max. H1 holds no essential pairs; cycles
/// still alive at epsilon_max are recorded with disappear = epsilon_max, and
/// zero-persistence cycles are dropped.
struct PersistenceDiagram {
  int dimension = 0;
  std::vector<PersistencePair> pairs;
  std::size_t n_points = 0;
  double epsilon_max = 0.0;

  std::size_t size() const noexcept { return pairs.size(); }
  bool empty() const noexcept { return pairs.empty(); }
  std::size_t essential_count() const noexcept;
  /// Sorts pairs so that equal multisets compare equal element-wise.
  void canonicalize();
  /// Multiset equality of pairs plus matching metadata.
  bool same_as(const PersistenceDiagram& other) const;
};

/// H0 by Kruskal over the thresholded graph: an edge that joins two components
/// records a death at its length.
PersistenceDiagram compute_h0(const SparseDistances& sd);

/// H1 from a materialized filtration. Throws ContractViolation if the
/// filtration is not in canonical order.
PersistenceDiagram compute_h1(const Filtration& f);

/// H1 streamed straight from the neighbourhood graph; identical output to
/// compute_h1(enumerate_cliques(sd)) without holding the triangles in memory.
PersistenceDiagram compute_h1(const SparseDistances& sd);

/// Textbook Z2 reduction of the full boundary matrix of `f`. Test oracle for
/// compute_h0 / compute_h1. Throws SizeError above kBruteForceLimit simplices.
std::pair<PersistenceDiagram, PersistenceDiagram> brute_force_reduce(const Filtration& f);

inline constexpr std::size_t kBruteForceLimit = 5000;

}  // namespace fbmtopo
