#include <cmath>
#include <random>

#include "doctest.h"
#include "fbmtopo/errors.hpp"
#include "fbmtopo/measures.hpp"
#include "oracles.hpp"

using namespace fbmtopo;

namespace {

PersistenceDiagram h0_with_deaths(std::vector<double> deaths, double eps_max = 5.0) {
  PersistenceDiagram d{0, {}, deaths.size() + 1, eps_max};
  for (double x : deaths) d.pairs.push_back({0.0, x, false});
  d.pairs.push_back({0.0, kInfinity, true});
  return d;
}

PersistenceDiagram h1_of(std::vector<std::pair<double, double>> bars, std::size_t n = 10,
                         double eps_max = 5.0) {
  PersistenceDiagram d{1, {}, n, eps_max};
  for (auto [a, b] : bars) d.pairs.push_back({a, b, false});
  return d;
}

}  // namespace

TEST_CASE("betti_curve counts pairs alive on a half-open interval") {
  const auto d0 = h0_with_deaths({1.0, 2.0});
  const std::vector<double> grid{1.5 * 3};
  const auto c = betti_curve(d0, grid);
  CHECK(c.counts[0] == 2);
  CHECK(c.values[0] == doctest::Approx(2.0 / 3.0));

  const auto empty = betti_curve(h1_of({}), std::vector<double>{0.0, 1.0, 10.0, 40.0});
  for (double v : empty.values) CHECK(v == 0.0);

  const auto bar = h1_of({{1.0, 2.0}}, 4);
  CHECK(betti_curve(bar, std::vector<double>{4.0, 7.9, 8.0}).counts == std::vector<std::size_t>{1, 1, 0});
}

TEST_CASE("betti_curve normalization and grid contract") {
  const auto d0 = h0_with_deaths({1.0, 2.0});
  const auto c = betti_curve(d0, std::vector<double>{0.0}, 6);
  CHECK(c.counts[0] == 3);
  CHECK(c.values[0] == 0.5);
  CHECK(c.normalization == 6);
  CHECK_THROWS_AS(betti_curve(d0, std::vector<double>{2.0, 1.0}), ContractViolation);
}

TEST_CASE("persistence entropy") {
  CHECK(persistence_entropy(h1_of({{0, 1}, {2, 3}})) == doctest::Approx(std::log(2.0)));
  CHECK(persistence_entropy(h1_of({{0.5, 0.7}})) == 0.0);
  const double expected = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  CHECK(expected == doctest::Approx(0.5623351446));
  CHECK(persistence_entropy(h1_of({{0, 1}, {1, 4}})) == doctest::Approx(expected));
  CHECK_THROWS_AS(persistence_entropy(h1_of({})), DegenerateInputError);
  CHECK_THROWS_AS(persistence_entropy(h1_of({{1, 1}, {2, 2}})), DegenerateInputError);
  // Zero-length bars are ignored.
  CHECK(persistence_entropy(h1_of({{0, 1}, {2, 3}, {4, 4}})) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("persistence entropy truncates the essential bar at epsilon_max") {
  // Deaths {1, 2} and an essential bar truncated at 3: lifespans {1, 2, 3}.
  const auto d0 = h0_with_deaths({1.0, 2.0}, 3.0);
  double e = 0.0;
  for (double l : {1.0, 2.0, 3.0}) e -= (l / 6.0) * std::log(l / 6.0);
  CHECK(persistence_entropy(d0) == doctest::Approx(e));
}

TEST_CASE("entropy is bounded by log n, with equality only for equal lifespans") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<double, double>> bars;
    const std::size_t n = 1 + gen() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = u(gen);
      bars.push_back({a, a + u(gen)});
    }
    const double e = persistence_entropy(h1_of(bars));
    CHECK(e >= 0.0);
    CHECK(e <= std::log(static_cast<double>(n)) + 1e-12);
    if (n > 1) CHECK(e < std::log(static_cast<double>(n)));
  }
  CHECK(persistence_entropy(h1_of({{0, 0.5}, {1, 1.5}, {0.2, 0.7}})) == doctest::Approx(std::log(3.0)));
}

TEST_CASE("critical scales") {
  const auto s = critical_scales(h1_of({{1, 2}, {1.5, 3}}));
  REQUIRE(s);
  CHECK(s->appear == 1.0);
  CHECK(s->disappear == 3.0);
  CHECK(s->maximize == 1.5);

  const auto s0 = critical_scales(h0_with_deaths({1.0, 2.0}));
  CHECK(s0->disappear == 2.0);
  CHECK(s0->appear == 0.0);
  CHECK(s0->maximize == 0.0);

  CHECK(critical_scales(h1_of({{1, 2}}))->maximize == 1.0);
  CHECK_FALSE(critical_scales(h1_of({})).has_value());

  // A bar ending exactly where another starts does not overlap it.
  CHECK(critical_scales(h1_of({{1, 2}, {2, 3}, {2.5, 2.7}}))->maximize == 2.5);
}

TEST_CASE("maximize is the first scale of the global maximum") {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> bars;
    const std::size_t n = 1 + gen() % 10;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::round(u(gen) * 20) / 20;
      bars.push_back({a, a + 0.05 + std::round(u(gen) * 10) / 20});
    }
    const auto d = h1_of(bars);
    const double m = critical_scales(d)->maximize;
    const std::size_t peak = betti_number(d, m);
    // Probe on a fine grid that contains every event scale.
    for (int k = 0; k <= 4000; ++k) {
      const double eps = k / 2000.0;
      CHECK(betti_number(d, eps) <= peak);
      if (eps < m) CHECK(betti_number(d, eps) < peak);
    }
  }
}

TEST_CASE("betti integral") {
  CHECK(betti_integral(h1_of({{1, 2}, {1.5, 3}})) == doctest::Approx(2.5));
  CHECK(betti_integral(h0_with_deaths({1.0, 2.0})) == doctest::Approx(5.0));
  CHECK(betti_integral(h1_of({})) == 0.0);

  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> bars;
    double total = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double a = u(gen), l = u(gen);
      bars.push_back({a, a + l});
      total += l;
    }
    CHECK(betti_integral(h1_of(bars)) == doctest::Approx(total));
  }
}

TEST_CASE("Betti numbers from diagrams agree with boundary-matrix ranks") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = oracle::random_cloud(gen, 14, 2);
    const double eps_max = 0.6;
    const auto sd = distance_matrix(PointCloud::from_points(pts), eps_max);
    const auto d0 = compute_h0(sd);
    const auto d1 = compute_h1(sd);
    for (int k = 0; k < 10; ++k) {
      const double eps = u(gen) * eps_max * 0.999;
      const auto [b0, b1] = oracle::betti_by_rank(pts, eps);
      CHECK(betti_number(d0, eps) == b0);
      CHECK(betti_number(d1, eps) == b1);
    }
  }
}

TEST_CASE("summarize scales by N and reports absent H1 measures") {
  const auto d0 = h0_with_deaths({1.0, 2.0});
  const auto d1 = h1_of({{1, 2}, {1.5, 3}}, 3);
  const auto a = summarize(d0, d1, 3);
  const auto b = summarize(d0, d1, 6);
  CHECK(a.eta0_disappear == 6.0);
  CHECK(b.eta0_disappear == 12.0);
  CHECK(a.b0 == b.b0);
  CHECK(a.e0 == b.e0);
  CHECK(*a.eta1_appear == 3.0);
  CHECK(*a.eta1_disappear == 9.0);
  CHECK(*a.eta1_maximize == 4.5);
  CHECK(a.b1 == doctest::Approx(2.5));
  CHECK(a.n1 == 2);
  CHECK(*a.e1 == doctest::Approx(persistence_entropy(d1)));

  const auto none = summarize(d0, h1_of({}, 3), 3);
  CHECK(none.n1 == 0);
  CHECK(none.b1 == 0.0);
  CHECK_FALSE(none.eta1_appear);
  CHECK_FALSE(none.eta1_disappear);
  CHECK_FALSE(none.eta1_maximize);
  CHECK_FALSE(none.e1);

  CHECK_THROWS_AS(summarize(d0, h1_of({}, 4), 4), ContractViolation);
  CHECK_THROWS_AS(summarize(d0, h1_of({}, 3), 2), ContractViolation);
  CHECK_THROWS_AS(summarize(d1, d0, 3), ContractViolation);
}

TEST_CASE("summary invariants on fBm clouds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double h = 0.1 + 0.08 * static_cast<double>(seed);
    const auto cloud = delay_embed(rescale_unit(generate_fbm(h, 150, seed)), 3, 1);
    const double eps = 0.2 * std::sqrt(3.0);
    const auto sd = distance_matrix(cloud, eps);
    const auto d0 = compute_h0(sd);
    const auto d1 = compute_h1(sd);
    const auto s = summarize(d0, d1, cloud.size());
    const double top = static_cast<double>(cloud.size()) * eps;
    CHECK(s.eta0_disappear >= 0.0);
    CHECK(s.eta0_disappear <= top);
    CHECK(s.e0 <= std::log(static_cast<double>(d0.size())) + 1e-12);
    double total = 0.0;
    for (const auto& p : d1.pairs) total += p.lifespan();
    CHECK(s.b1 == doctest::Approx(total));
    if (s.n1 > 0) {
      CHECK(*s.eta1_appear <= *s.eta1_maximize);
      CHECK(*s.eta1_maximize <= *s.eta1_disappear);
      CHECK(*s.eta1_disappear <= top);
      CHECK(*s.e1 <= std::log(static_cast<double>(s.n1)) + 1e-12);
    }
  }
}
