#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fbmtopo/persistence.hpp"

namespace fbmtopo {

/// Betti curve sampled on a grid of normalized scales eta = N * epsilon.
struct BettiCurve {
  int dimension = 0;
  std::vector<double> grid;          // eta, ascending
  std::vector<std::size_t> counts;   // beta_d at each grid point
  std::vector<double> values;        // counts / normalization
  std::size_t normalization = 0;     // N
};

/// beta_d(eta) = #{pairs : appear <= eta/N < disappear}. Essential pairs never
/// disappear. `normalization` is N; 0 means diag.n_points.
BettiCurve betti_curve(const PersistenceDiagram& diag, std::span<const double> grid,
                       std::size_t normalization = 0);

/// Number of pairs alive at scale epsilon (half-open convention).
std::size_t betti_number(const PersistenceDiagram& diag, double epsilon);

/// Shannon entropy (natural log) of the lifespan distribution. Essential bars
/// are truncated at epsilon_max. Throws DegenerateInputError when the diagram is
/// empty or every lifespan is zero.
double persistence_entropy(const PersistenceDiagram& diag);

/// Critical scales of a Betti curve, in epsilon units.
struct CriticalScales {
  double appear = 0.0;
  double disappear = 0.0;
  double maximize = 0.0;
};

/// appear: first scale with a live class. disappear: last finite death (for H0
/// the scale after which one component remains). maximize: smallest scale at
/// which beta_d reaches its global maximum, found from the diagram's events.
/// For H0, appear = maximize = 0. Returns nullopt for an empty H1 diagram.
std::optional<CriticalScales> critical_scales(const PersistenceDiagram& diag);

/// Exact integral of beta_d over [appear, disappear] (epsilon units). For H1 this
/// is the total persistence; for H0 it is the sum of merge deaths plus
/// disappear, the essential class contributing across the whole window.
double betti_integral(const PersistenceDiagram& diag);

/// The nine measures of one realization. Scale-valued fields are in eta = N*epsilon
/// units. B0/B1 are integrals of beta-tilde d(eta), which equal the epsilon-axis
/// integrals of beta. H1 fields are empty when the diagram has no pairs; n1 is
/// then 0.
struct TopologicalSummary {
  double eta0_disappear = 0.0;
  double b0 = 0.0;
  double e0 = 0.0;
  std::optional<double> eta1_appear;
  std::optional<double> eta1_disappear;
  std::optional<double> eta1_maximize;
  double b1 = 0.0;
  std::optional<double> e1;
  std::size_t n1 = 0;

  // Provenance; filled in by whoever knows it.
  double hurst = 0.0;
  std::size_t dim = 0;
  std::size_t delay = 0;
  double q = 0.0;
  std::uint64_t seed = 0;
};

/// Throws ContractViolation if the diagrams disagree on point count or
/// epsilon_max, or if normalization < n_points.
TopologicalSummary summarize(const PersistenceDiagram& d0, const PersistenceDiagram& d1,
                             std::size_t normalization);

}  // namespace fbmtopo
