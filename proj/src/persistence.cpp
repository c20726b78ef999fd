#include "fbmtopo/persistence.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>

#include "fbmtopo/errors.hpp"
#include "fbmtopo/union_find.hpp"

namespace fbmtopo {

std::size_t PersistenceDiagram::essential_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const PersistencePair& p) { return p.essential; }));
}

void PersistenceDiagram::canonicalize() { std::sort(pairs.begin(), pairs.end()); }

bool PersistenceDiagram::same_as(const PersistenceDiagram& other) const {
  if (dimension != other.dimension || n_points != other.n_points ||
      epsilon_max != other.epsilon_max || pairs.size() != other.pairs.size())
    return false;
  auto a = pairs;
  auto b = other.pairs;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

PersistenceDiagram compute_h0(const SparseDistances& sd) {
  PersistenceDiagram d;
  d.dimension = 0;
  d.n_points = sd.n_points;
  d.epsilon_max = sd.epsilon_max;
  d.pairs.reserve(sd.n_points);

  UnionFind components(sd.n_points);
  for (const Edge& e : sd.edges) {
    if (components.unite(e.u, e.v)) d.pairs.push_back({0.0, e.length, false});
    if (components.components() == 1) break;
  }
  for (std::size_t i = 0; i < components.components(); ++i)
    d.pairs.push_back({0.0, kInfinity, true});
  d.canonicalize();
  return d;
}

namespace {

// Column reduction of the triangle boundary matrix, fed one triangle at a time
// in filtration order.
//
// Rows of negative edges (those that merge components) are dropped from every
// column: such an edge is never the pivot of a reduced triangle column, and
// zeroing its row leaves the pairing unchanged. A triangle whose pivot is still
// free is paired without any column additions.
class H1Reducer {
 public:
  H1Reducer(std::vector<double> edge_values, std::vector<bool> positive, double epsilon_max)
      : edge_values_(std::move(edge_values)),
        positive_(std::move(positive)),
        owner_(edge_values_.size(), kFree),
        epsilon_max_(epsilon_max) {}

  void add(const std::array<EdgeRank, 3>& edges, double value) {
    work_.clear();
    for (EdgeRank e : edges)
      if (positive_[e]) work_.push_back(e);
    std::sort(work_.begin(), work_.end());

    while (!work_.empty()) {
      const EdgeRank low = work_.back();
      const std::uint32_t owner = owner_[low];
      if (owner == kFree) {
        owner_[low] = static_cast<std::uint32_t>(columns_.size());
        columns_.push_back(work_);
        if (edge_values_[low] != value) pairs_.push_back({edge_values_[low], value, false});
        return;
      }
      const auto& other = columns_[owner];
      scratch_.clear();
      std::set_symmetric_difference(work_.begin(), work_.end(), other.begin(), other.end(),
                                    std::back_inserter(scratch_));
      work_.swap(scratch_);
    }
  }

  PersistenceDiagram finish(std::size_t n_points) {
    PersistenceDiagram d;
    d.dimension = 1;
    d.n_points = n_points;
    d.epsilon_max = epsilon_max_;
    d.pairs = std::move(pairs_);
    for (std::size_t e = 0; e < edge_values_.size(); ++e) {
      if (positive_[e] && owner_[e] == kFree && edge_values_[e] < epsilon_max_)
        d.pairs.push_back({edge_values_[e], epsilon_max_, false});
    }
    d.canonicalize();
    return d;
  }

 private:
  static constexpr std::uint32_t kFree = UINT32_MAX;

  std::vector<double> edge_values_;
  std::vector<bool> positive_;
  std::vector<std::uint32_t> owner_;
  std::vector<std::vector<EdgeRank>> columns_;
  std::vector<PersistencePair> pairs_;
  std::vector<EdgeRank> work_;
  std::vector<EdgeRank> scratch_;
  double epsilon_max_;
};

std::vector<bool> positive_edges(std::size_t n_points, std::span<const Edge> edges) {
  std::vector<bool> positive(edges.size(), false);
  UnionFind components(n_points);
  for (std::size_t r = 0; r < edges.size(); ++r)
    positive[r] = !components.unite(edges[r].u, edges[r].v);
  return positive;
}

std::uint64_t edge_key(VertexId u, VertexId v) {
  return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

PersistenceDiagram compute_h1(const SparseDistances& sd) {
  std::vector<double> values(sd.edges.size());
  for (std::size_t r = 0; r < sd.edges.size(); ++r) values[r] = sd.edges[r].length;
  H1Reducer reducer(std::move(values), positive_edges(sd.n_points, sd.edges), sd.epsilon_max);
  stream_rips_skeleton(
      sd, [](EdgeRank, std::span<const Edge>) {},
      [&](std::span<const Triangle> triangles) {
        for (const Triangle& t : triangles)
          if (!t.spanned_by_earlier) reducer.add(t.edges, t.value);
      });
  return reducer.finish(sd.n_points);
}

PersistenceDiagram compute_h1(const Filtration& f) {
  if (!f.is_sorted()) throw ContractViolation("compute_h1: filtration is not in canonical order");

  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, EdgeRank> rank_of;
  for (const Simplex& s : f.simplices) {
    if (s.dim != 1) continue;
    rank_of.emplace(edge_key(s.vertices[0], s.vertices[1]), static_cast<EdgeRank>(edges.size()));
    edges.push_back({s.vertices[0], s.vertices[1], s.value});
  }
  auto rank = [&](VertexId a, VertexId b) {
    auto it = rank_of.find(edge_key(a, b));
    if (it == rank_of.end()) throw ContractViolation("compute_h1: triangle edge missing from filtration");
    return it->second;
  };

  std::vector<double> values(edges.size());
  for (std::size_t r = 0; r < edges.size(); ++r) values[r] = edges[r].length;
  H1Reducer reducer(std::move(values), positive_edges(f.n_points, edges), f.epsilon_max);
  for (const Simplex& s : f.simplices) {
    if (s.dim != 2) continue;
    const auto& v = s.vertices;
    reducer.add({rank(v[0], v[1]), rank(v[0], v[2]), rank(v[1], v[2])}, s.value);
  }
  return reducer.finish(f.n_points);
}

std::pair<PersistenceDiagram, PersistenceDiagram> brute_force_reduce(const Filtration& f) {
  const auto& simplices = f.simplices;
  if (simplices.size() > kBruteForceLimit)
    throw SizeError("brute_force_reduce: " + std::to_string(simplices.size()) +
                    " simplices exceeds the limit of " + std::to_string(kBruteForceLimit));
  if (!f.is_sorted()) throw ContractViolation("brute_force_reduce: filtration is not sorted");

  const std::size_t n = simplices.size();
  std::map<std::vector<VertexId>, std::size_t> index_of;
  for (std::size_t i = 0; i < n; ++i) {
    const auto vs = simplices[i].vertex_span();
    index_of.emplace(std::vector<VertexId>(vs.begin(), vs.end()), i);
  }

  // Boundary columns: the codimension-1 faces of each simplex, as sorted row indices.
  std::vector<std::vector<std::size_t>> column(n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto vs = simplices[j].vertex_span();
    if (vs.size() == 1) continue;
    for (std::size_t drop = 0; drop < vs.size(); ++drop) {
      std::vector<VertexId> face;
      for (std::size_t k = 0; k < vs.size(); ++k)
        if (k != drop) face.push_back(vs[k]);
      auto it = index_of.find(face);
      if (it == index_of.end()) throw ContractViolation("brute_force_reduce: missing face");
      column[j].push_back(it->second);
    }
    std::sort(column[j].begin(), column[j].end());
  }

  // Left-to-right reduction: add earlier columns until each low is unique.
  constexpr std::size_t kNone = SIZE_MAX;
  std::vector<std::size_t> column_with_low(n, kNone);
  std::vector<std::size_t> paired_with(n, kNone);
  for (std::size_t j = 0; j < n; ++j) {
    auto& col = column[j];
    while (!col.empty() && column_with_low[col.back()] != kNone) {
      const auto& other = column[column_with_low[col.back()]];
      std::vector<std::size_t> sum;
      std::set_symmetric_difference(col.begin(), col.end(), other.begin(), other.end(),
                                    std::back_inserter(sum));
      col = std::move(sum);
    }
    if (!col.empty()) {
      column_with_low[col.back()] = j;
      paired_with[col.back()] = j;
      paired_with[j] = col.back();
    }
  }

  PersistenceDiagram h0{0, {}, f.n_points, f.epsilon_max};
  PersistenceDiagram h1{1, {}, f.n_points, f.epsilon_max};
  for (std::size_t i = 0; i < n; ++i) {
    const Simplex& s = simplices[i];
    const bool creator = column[i].empty();
    if (!creator) continue;  // negative simplex; recorded through its partner
    if (s.dim == 0) {
      if (paired_with[i] == kNone)
        h0.pairs.push_back({0.0, kInfinity, true});
      else
        h0.pairs.push_back({s.value, simplices[paired_with[i]].value, false});
    } else if (s.dim == 1) {
      const double death = paired_with[i] == kNone ? f.epsilon_max : simplices[paired_with[i]].value;
      if (death != s.value) h1.pairs.push_back({s.value, death, false});
    }
  }
  h0.canonicalize();
  h1.canonicalize();
  return {std::move(h0), std::move(h1)};
}

}  // namespace fbmtopo
