#include "fbmtopo/embedding.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "fbmtopo/errors.hpp"

namespace fbmtopo {

void PointCloud::push_back(std::span<const double> p, std::size_t source) {
  if (p.size() != dim) throw ContractViolation("point dimension does not match cloud");
  coords.insert(coords.end(), p.begin(), p.end());
  source_index.push_back(source);
}

PointCloud PointCloud::from_points(const std::vector<std::vector<double>>& points) {
  PointCloud cloud;
  cloud.dim = points.empty() ? 1 : points.front().size();
  for (std::size_t i = 0; i < points.size(); ++i) cloud.push_back(points[i], i);
  return cloud;
}

TimeSeries rescale_unit(const TimeSeries& series) {
  if (series.values.size() != series.mask.size())
    throw ContractViolation("series values and mask differ in length");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (!series.mask[i]) continue;
    lo = std::min(lo, series.values[i]);
    hi = std::max(hi, series.values[i]);
  }
  if (!(hi > lo)) throw DegenerateInputError("cannot rescale: present samples have zero range");

  TimeSeries out = series;
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out.mask[i] && out.values[i] == hi)
      out.values[i] = 1.0;  // exact endpoint despite rounding in (v-lo)*inv
    else
      out.values[i] = (out.values[i] - lo) * inv;
  }
  return out;
}

std::size_t embedded_capacity(std::size_t length, std::size_t dim, std::size_t delay) {
  if (dim == 0) throw DomainError("embedding dimension must be at least 1");
  const std::size_t span = (dim - 1) * delay;
  if (span >= length)
    throw DomainError("series of length " + std::to_string(length) +
                      " too short for dim=" + std::to_string(dim) +
                      ", delay=" + std::to_string(delay));
  return length - span;
}

PointCloud delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay) {
  const std::size_t n = embedded_capacity(series.size(), dim, delay);

  PointCloud cloud;
  cloud.dim = dim;
  cloud.delay = delay;
  cloud.coords.reserve(n * dim);
  cloud.source_index.reserve(n);
  std::vector<double> state(dim);
  for (std::size_t t = 0; t < n; ++t) {
    bool complete = true;
    for (std::size_t k = 0; k < dim && complete; ++k) {
      const std::size_t s = t + k * delay;
      complete = series.mask[s];
      state[k] = series.values[s];
    }
    if (complete) cloud.push_back(state, t);
  }
  return cloud;
}

std::size_t usable_missing_count(const TimeSeries& series, std::size_t dim, std::size_t delay) {
  const std::size_t n = embedded_capacity(series.size(), dim, delay);
  std::vector<bool> used(series.size(), false);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t t = 0; t < n; ++t) used[t + k * delay] = true;
  std::size_t count = 0;
  for (std::size_t s = 0; s < series.size(); ++s)
    if (used[s] && !series.mask[s]) ++count;
  return count;
}

}  // namespace fbmtopo
