#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fbmtopo/embedding.hpp"

namespace fbmtopo {

using VertexId = std::uint32_t;
using EdgeRank = std::uint32_t;

struct Edge {
  VertexId u;  // u < v
  VertexId v;
  double length;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge order of the filtration: by length, then lexicographically by endpoints.
constexpr bool edge_order(const Edge& a, const Edge& b) noexcept {
  if (a.length != b.length) return a.length < b.length;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

/// All pairs at Euclidean distance <= epsilon_max, sorted by edge_order.
/// An edge's position in `edges` is its rank.
struct SparseDistances {
  std::vector<Edge> edges;
  std::size_t n_points = 0;
  double epsilon_max = 0.0;
};

/// Closed-threshold neighbourhood graph of a cloud. Throws DomainError on an
/// empty cloud or non-positive epsilon_max.
SparseDistances distance_matrix(const PointCloud& cloud, double epsilon_max);

/// Removes exact duplicate points, keeping the first occurrence. Returns the
/// number of points removed.
std::size_t merge_duplicate_points(PointCloud& cloud);

struct Simplex {
  std::array<VertexId, 3> vertices{};  // ascending; only the first dim+1 are used
  int dim = 0;
  double value = 0.0;

  std::span<const VertexId> vertex_span() const noexcept {
    return {vertices.data(), static_cast<std::size_t>(dim + 1)};
  }
  friend bool operator==(const Simplex&, const Simplex&) = default;
};

/// Canonical filtration order: (value, dim, lexicographic vertices).
bool filtration_order(const Simplex& a, const Simplex& b) noexcept;

/// Vietoris-Rips 2-skeleton in canonical order.
struct Filtration {
  std::vector<Simplex> simplices;
  std::size_t n_points = 0;
  double epsilon_max = 0.0;

  bool is_sorted() const;
};

/// One triangle of the 2-skeleton, with the ranks of its three edges.
struct Triangle {
  std::array<VertexId, 3> vertices;  // ascending
  std::array<EdgeRank, 3> edges;     // ranks of (v0,v1), (v0,v2), (v1,v2)
  double value;
  /// Set when the boundary is provably a sum of boundaries of earlier
  /// triangles: an earlier triangle (u, v, w') on the same diameter edge has
  /// its apex w' joined to w by a strictly shorter edge, so
  /// d(u,v,w) = d(u,v,w') + d(u,w,w') + d(v,w,w').
  bool spanned_by_earlier = false;
};

/// Walks the Rips 2-skeleton of `sd` in canonical filtration order without
/// materializing it. Vertices are implicit (all value 0, first). Then, for each
/// group of edges sharing one length L, `on_edges(first_rank, edges)` is called,
/// followed by `on_triangles(triangles)` with every triangle of diameter L,
/// sorted lexicographically.
///
/// Triangles are found by intersecting sorted adjacency lists that only hold
/// edges of lower rank, so each triangle is produced exactly once, from its
/// highest-rank edge. Within one diameter edge the apexes come in ascending
/// order, which is also their filtration order.
template <typename OnEdges, typename OnTriangles>
void stream_rips_skeleton(const SparseDistances& sd, OnEdges&& on_edges,
                          OnTriangles&& on_triangles) {
  struct Neighbour {
    VertexId vertex;
    EdgeRank rank;
  };
  std::vector<std::vector<Neighbour>> adjacency(sd.n_points);
  std::vector<Triangle> group_triangles;
  std::vector<VertexId> apexes;
  auto adjacent = [&](VertexId a, VertexId b) {
    const auto& list = adjacency[a];
    auto pos = std::lower_bound(list.begin(), list.end(), b,
                                [](const Neighbour& n, VertexId x) { return n.vertex < x; });
    return pos != list.end() && pos->vertex == b;
  };
  // How many earlier apexes to test before giving up on the shortcut.
  constexpr std::size_t kApexProbe = 16;

  const auto& edges = sd.edges;
  std::size_t begin = 0;
  while (begin < edges.size()) {
    std::size_t end = begin + 1;
    while (end < edges.size() && edges[end].length == edges[begin].length) ++end;

    on_edges(static_cast<EdgeRank>(begin),
             std::span<const Edge>(edges.data() + begin, end - begin));

    group_triangles.clear();
    // With tied lengths the lexicographic order inside the group need not
    // match rank order, so the shortcut is only used for lone edges.
    const bool lone_edge = end - begin == 1;
    for (std::size_t r = begin; r < end; ++r) {
      const Edge& e = edges[r];
      apexes.clear();
      const auto& nu = adjacency[e.u];
      const auto& nv = adjacency[e.v];
      auto a = nu.begin();
      auto b = nv.begin();
      while (a != nu.end() && b != nv.end()) {
        if (a->vertex < b->vertex) {
          ++a;
        } else if (b->vertex < a->vertex) {
          ++b;
        } else {
          const VertexId w = a->vertex;
          Triangle t;
          t.value = e.length;
          // Order (u, v, w) ascending and name the edges accordingly.
          if (w < e.u) {
            t.vertices = {w, e.u, e.v};
            t.edges = {a->rank, b->rank, static_cast<EdgeRank>(r)};
          } else if (w < e.v) {
            t.vertices = {e.u, w, e.v};
            t.edges = {a->rank, static_cast<EdgeRank>(r), b->rank};
          } else {
            t.vertices = {e.u, e.v, w};
            t.edges = {static_cast<EdgeRank>(r), a->rank, b->rank};
          }
          if (lone_edge) {
            const std::size_t stop = apexes.size() > kApexProbe ? apexes.size() - kApexProbe : 0;
            for (std::size_t p = apexes.size(); p > stop; --p) {
              if (adjacent(w, apexes[p - 1])) {
                t.spanned_by_earlier = true;
                break;
              }
            }
            apexes.push_back(w);
          }
          group_triangles.push_back(t);
          ++a;
          ++b;
        }
      }
      auto insert = [](std::vector<Neighbour>& list, VertexId vertex, EdgeRank rank) {
        auto pos = std::lower_bound(list.begin(), list.end(), vertex,
                                    [](const Neighbour& n, VertexId x) { return n.vertex < x; });
        list.insert(pos, Neighbour{vertex, rank});
      };
      insert(adjacency[e.u], e.v, static_cast<EdgeRank>(r));
      insert(adjacency[e.v], e.u, static_cast<EdgeRank>(r));
    }
    if (end - begin > 1) {
      std::sort(group_triangles.begin(), group_triangles.end(),
                [](const Triangle& x, const Triangle& y) { return x.vertices < y.vertices; });
    }
    if (!group_triangles.empty())
      on_triangles(std::span<const Triangle>(group_triangles.data(), group_triangles.size()));
    begin = end;
  }
}

/// Materializes the Rips 2-skeleton: N vertices, every stored edge, and every
/// triangle whose three edges are stored, in canonical order.
Filtration enumerate_cliques(const SparseDistances& sd);

}  // namespace fbmtopo
