#include "fbmtopo/rips.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fbmtopo/errors.hpp"

namespace fbmtopo {

SparseDistances distance_matrix(const PointCloud& cloud, double epsilon_max) {
  if (cloud.empty()) throw DomainError("distance_matrix: empty point cloud");
  if (!(epsilon_max > 0.0)) throw DomainError("distance_matrix: epsilon_max must be positive");
  if (cloud.size() > std::numeric_limits<VertexId>::max())
    throw SizeError("distance_matrix: too many points");

  SparseDistances sd;
  sd.n_points = cloud.size();
  sd.epsilon_max = epsilon_max;
  const double limit_sq = epsilon_max * epsilon_max;
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim;
  const double* x = cloud.coords.data();
  for (std::size_t i = 0; i < n; ++i) {
    const double* pi = x + i * dim;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* pj = x + j * dim;
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = pi[k] - pj[k];
        sq += d * d;
      }
      // Squared pre-filter with slack, exact test on the rooted value.
      if (sq > limit_sq * (1.0 + 1e-12)) continue;
      const double length = std::sqrt(sq);
      if (length <= epsilon_max)
        sd.edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(j), length});
    }
  }
  std::sort(sd.edges.begin(), sd.edges.end(), edge_order);
  return sd;
}

std::size_t merge_duplicate_points(PointCloud& cloud) {
  const std::size_t n = cloud.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto less = [&](std::size_t a, std::size_t b) {
    const auto pa = cloud.point(a);
    const auto pb = cloud.point(b);
    if (std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end())) return true;
    if (std::lexicographical_compare(pb.begin(), pb.end(), pa.begin(), pa.end())) return false;
    return a < b;
  };
  std::sort(order.begin(), order.end(), less);
  std::vector<bool> drop(n, false);
  std::size_t removed = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const auto prev = cloud.point(order[k - 1]);
    const auto cur = cloud.point(order[k]);
    if (std::equal(prev.begin(), prev.end(), cur.begin())) {
      drop[order[k]] = true;
      ++removed;
    }
  }
  if (removed == 0) return 0;

  PointCloud kept;
  kept.dim = cloud.dim;
  kept.delay = cloud.delay;
  for (std::size_t i = 0; i < n; ++i)
    if (!drop[i]) kept.push_back(cloud.point(i), cloud.source_index[i]);
  cloud = std::move(kept);
  return removed;
}

bool filtration_order(const Simplex& a, const Simplex& b) noexcept {
  if (a.value != b.value) return a.value < b.value;
  if (a.dim != b.dim) return a.dim < b.dim;
  return std::lexicographical_compare(a.vertices.begin(), a.vertices.begin() + a.dim + 1,
                                      b.vertices.begin(), b.vertices.begin() + b.dim + 1);
}

bool Filtration::is_sorted() const {
  return std::is_sorted(simplices.begin(), simplices.end(), filtration_order);
}

Filtration enumerate_cliques(const SparseDistances& sd) {
  Filtration f;
  f.n_points = sd.n_points;
  f.epsilon_max = sd.epsilon_max;
  f.simplices.reserve(sd.n_points + sd.edges.size());
  for (std::size_t i = 0; i < sd.n_points; ++i) {
    Simplex s;
    s.vertices = {static_cast<VertexId>(i), 0, 0};
    f.simplices.push_back(s);
  }
  stream_rips_skeleton(
      sd,
      [&](EdgeRank, std::span<const Edge> edges) {
        for (const Edge& e : edges) f.simplices.push_back({{e.u, e.v, 0}, 1, e.length});
      },
      [&](std::span<const Triangle> triangles) {
        for (const Triangle& t : triangles) f.simplices.push_back({t.vertices, 2, t.value});
      });
  return f;
}

}  // namespace fbmtopo
