#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fbmtopo/fbm.hpp"

namespace fbmtopo {

/// Delay-embedded state vectors, stored row-major (`dim` coordinates per point).
struct PointCloud {
  std::vector<double> coords;
  std::vector<std::size_t> source_index;  // 0-based time index t of each point
  std::size_t dim = 1;
  std::size_t delay = 0;

  std::size_t size() const noexcept { return source_index.size(); }
  bool empty() const noexcept { return source_index.empty(); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {coords.data() + i * dim, dim};
  }

  /// Appends one point; `p.size()` must equal `dim`.
  void push_back(std::span<const double> p, std::size_t source);
  /// Builds a cloud from explicit points (used by tests and the CLI).
  static PointCloud from_points(const std::vector<std::vector<double>>& points);
};

/// Maps present samples affinely onto [0, 1] (min -> 0, max -> 1). Masked samples
/// do not influence the map; they are transformed by it but never read downstream.
/// Throws DegenerateInputError when fewer than two distinct present values exist.
TimeSeries rescale_unit(const TimeSeries& series);

/// Time-delay embedding x_t -> (x_t, x_{t+tau}, ..., x_{t+(dim-1)tau}) for
/// t = 0 .. T-(dim-1)tau-1. Vectors touching a masked sample are omitted.
/// Throws DomainError if dim == 0 or T - (dim-1)tau < 1.
PointCloud delay_embed(const TimeSeries& series, std::size_t dim, std::size_t delay);

/// T - (dim-1)tau for the regular series, i.e. the cloud size with no missing data.
std::size_t embedded_capacity(std::size_t length, std::size_t dim, std::size_t delay);

/// Number of masked samples that appear as a coordinate of at least one candidate vector.
std::size_t usable_missing_count(const TimeSeries& series, std::size_t dim, std::size_t delay);

}  // namespace fbmtopo
