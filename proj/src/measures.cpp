#include "fbmtopo/measures.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fbmtopo/errors.hpp"

namespace fbmtopo {

namespace {

// (scale, +1 birth / -1 death) events; beta after all events at a scale is the
// value on [scale, next scale).
std::vector<std::pair<double, int>> events_of(const PersistenceDiagram& diag) {
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * diag.size());
  for (const auto& p : diag.pairs) {
    events.emplace_back(p.appear, +1);
    if (!p.essential) events.emplace_back(p.disappear, -1);
  }
  std::sort(events.begin(), events.end());
  return events;
}

double last_finite_death(const PersistenceDiagram& diag) {
  double last = 0.0;
  for (const auto& p : diag.pairs)
    if (!p.essential) last = std::max(last, p.disappear);
  return last;
}

}  // namespace

std::size_t betti_number(const PersistenceDiagram& diag, double epsilon) {
  return static_cast<std::size_t>(std::count_if(diag.pairs.begin(), diag.pairs.end(), [&](const auto& p) {
    return p.appear <= epsilon && (p.essential || epsilon < p.disappear);
  }));
}

BettiCurve betti_curve(const PersistenceDiagram& diag, std::span<const double> grid,
                       std::size_t normalization) {
  BettiCurve curve;
  curve.dimension = diag.dimension;
  curve.normalization = normalization == 0 ? diag.n_points : normalization;
  if (curve.normalization == 0) throw ContractViolation("betti_curve: zero normalization");
  curve.grid.assign(grid.begin(), grid.end());
  if (!std::is_sorted(curve.grid.begin(), curve.grid.end()))
    throw ContractViolation("betti_curve: grid must be ascending");

  const double n = static_cast<double>(curve.normalization);
  curve.counts.reserve(grid.size());
  curve.values.reserve(grid.size());
  for (double eta : grid) {
    const std::size_t beta = betti_number(diag, eta / n);
    curve.counts.push_back(beta);
    curve.values.push_back(static_cast<double>(beta) / n);
  }
  return curve;
}

double persistence_entropy(const PersistenceDiagram& diag) {
  std::vector<double> life;
  life.reserve(diag.size());
  double total = 0.0;
  for (const auto& p : diag.pairs) {
    const double l = (p.essential ? diag.epsilon_max : p.disappear) - p.appear;
    life.push_back(l);
    total += l;
  }
  if (!(total > 0.0)) throw DegenerateInputError("persistence entropy undefined: no positive lifespan");
  double entropy = 0.0;
  for (double l : life) {
    if (l <= 0.0) continue;
    const double p = l / total;
    entropy -= p * std::log(p);
  }
  return entropy;
}

std::optional<CriticalScales> critical_scales(const PersistenceDiagram& diag) {
  if (diag.dimension == 0) return CriticalScales{0.0, last_finite_death(diag), 0.0};
  if (diag.empty()) return std::nullopt;

  CriticalScales s;
  s.appear = diag.pairs.front().appear;
  for (const auto& p : diag.pairs) s.appear = std::min(s.appear, p.appear);
  s.disappear = last_finite_death(diag);

  const auto events = events_of(diag);
  long beta = 0;
  long best = -1;
  for (std::size_t i = 0; i < events.size();) {
    const double scale = events[i].first;
    for (; i < events.size() && events[i].first == scale; ++i) beta += events[i].second;
    if (beta > best) {
      best = beta;
      s.maximize = scale;
    }
  }
  return s;
}

double betti_integral(const PersistenceDiagram& diag) {
  if (diag.empty()) return 0.0;
  const auto scales = critical_scales(diag);
  const double lo = scales->appear;
  const double hi = scales->disappear;

  const auto events = events_of(diag);
  double integral = 0.0;
  long beta = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double scale = events[i].first;
    for (; i < events.size() && events[i].first == scale; ++i) beta += events[i].second;
    const double next = i < events.size() ? events[i].first : hi;
    const double a = std::max(scale, lo);
    const double b = std::min(next, hi);
    if (b > a) integral += static_cast<double>(beta) * (b - a);
  }
  return integral;
}

TopologicalSummary summarize(const PersistenceDiagram& d0, const PersistenceDiagram& d1,
                             std::size_t normalization) {
  if (d0.dimension != 0 || d1.dimension != 1)
    throw ContractViolation("summarize: expected an H0 and an H1 diagram");
  if (d0.n_points != d1.n_points || d0.epsilon_max != d1.epsilon_max)
    throw ContractViolation("summarize: diagrams come from different filtrations");
  if (normalization < d0.n_points)
    throw ContractViolation("summarize: normalization smaller than the cloud");

  const double n = static_cast<double>(normalization);
  TopologicalSummary s;
  const auto c0 = critical_scales(d0);
  s.eta0_disappear = n * c0->disappear;
  s.b0 = betti_integral(d0);
  s.e0 = persistence_entropy(d0);

  s.n1 = d1.size();
  if (const auto c1 = critical_scales(d1)) {
    s.eta1_appear = n * c1->appear;
    s.eta1_disappear = n * c1->disappear;
    s.eta1_maximize = n * c1->maximize;
    s.e1 = persistence_entropy(d1);
  }
  s.b1 = betti_integral(d1);
  return s;
}

}  // namespace fbmtopo
