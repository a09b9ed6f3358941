#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "tlg/field.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/rng.hpp"
#include "tlg/sampler.hpp"
#include "tlg/tower.hpp"

using namespace tlg;
using namespace tlg::sampling;
using doctest::Approx;

TEST_CASE("counter streams are reproducible and independent of order") {
  CounterRng a({7, 3}), b({7, 3}), c({7, 4});
  std::vector<std::uint64_t> xa, xc;
  for (int i = 0; i < 10; ++i) {
    xa.push_back(a());
    CHECK(b() == xa.back());
    xc.push_back(c());
  }
  CHECK(xa != xc);
  CounterRng u({1, 0});
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("normal draws pass a KS test") {
  CounterRng r({99, 0});
  std::vector<double> xs(20000);
  for (double& x : xs) x = r.normal();
  CHECK(ks_statistic_normal(xs) < ks_critical(xs.size(), 0.001));
  // and a shifted sample fails it
  for (double& x : xs) x += 0.2;
  CHECK(ks_statistic_normal(xs) > ks_critical(xs.size(), 0.001));
}

TEST_CASE("bridge endpoints and moments") {
  CounterRng r({5, 0});
  auto v = sample_bridge(0.0, 1.0, 1.0, 2.0, {}, r);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == 1.0);
  CHECK(v[1] == 2.0);

  const int n = 100000;
  double s = 0, s2 = 0, sa = 0, sb = 0, sab = 0;
  for (int i = 0; i < n; ++i) {
    CounterRng g({6, static_cast<std::uint64_t>(i)});
    auto w = sample_bridge(0.0, 0.0, 1.0, 0.0, {0.25, 0.5}, g);
    s += w[2];
    s2 += w[2] * w[2];
    sa += w[1];
    sb += w[2];
    sab += w[1] * w[2];
  }
  const double mean = s / n, var = s2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(0.25 / n));
  // variance of the sample variance of a normal is 2 sigma^4 / n
  CHECK(std::abs(var - 0.25) < 4.0 * std::sqrt(2.0 * 0.0625 / n));
  // cov at 1/4 and 1/2 on a unit bridge: 1/4 * 1/2 = 1/8
  const double cov = sab / n - (sa / n) * (sb / n);
  CHECK(std::abs(cov - 0.125) < 0.005);
}

TEST_CASE("mc covariance on a single cell") {
  Graph g = fixtures::single_cell(-1, 0, 1, 2);
  Tower t = build_tower(g);
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g).with_times(1, {1 / 3.0}).with_times(2, {0.5});
  const std::size_t p = grid.node(*grid.find(1, 1 / 3.0)), q = grid.node(*grid.find(2, 0.5));
  NaturalSampler s(g, t, grid, gauss::Law::two_sided());
  McEstimate e = mc_covariance(s, p, q, 200000, 1);
  CHECK(e.n == 200000);
  CHECK(e.batches == kBatches);
  CHECK(std::abs(e.estimate - 1 / 6.0) <= 4.0 * e.std_error);
  // same seed, same answer
  CHECK(mc_covariance(s, p, q, 200000, 1).estimate == e.estimate);
}

TEST_CASE("mc variance on the base path") {
  Graph g = fixtures::minimal();
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g).with_times(0, {0.3});
  const std::size_t p = grid.node(*grid.find(0, 0.3));
  McEstimate e = mc_covariance(g, build_tower(g), grid, gauss::Law::wiener(), grid.point_of(p), grid.point_of(p),
                               100000, 2);
  CHECK(std::abs(e.estimate - 0.3) <= 4.0 * e.std_error);
}

TEST_CASE("fig4 matrix against the engine") {
  Graph g = fixtures::fig4();
  Tower t = build_tower(g);
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g);
  gauss::GaussianField f = gauss::build_field(g, t, grid, gauss::Law::wiener());
  NaturalSampler s(g, t, grid, gauss::Law::wiener());
  std::vector<std::size_t> nodes;
  for (std::size_t v = 1; v + 1 < g.vertex_count(); ++v) nodes.push_back(v);
  McMatrix m = mc_covariance_matrix(s, nodes, 100000, 3);
  int outside = 0, total = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i; j < nodes.size(); ++j) {
      ++total;
      const double want = f.covariance_nodes(nodes[i], nodes[j]);
      if (std::abs(m.estimate(i, j) - want) > 4.0 * m.std_error(i, j)) ++outside;
    }
  // 55 entries at 4 standard errors: none expected outside
  CHECK(outside == 0);
  CHECK(total == 55);
}

TEST_CASE("sampling needs a tower") {
  Graph g = fixtures::fig2();
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g);
  CHECK_THROWS_AS(mc_covariance(g, grid, gauss::Law::wiener(), grid.point_of(4), grid.point_of(5), 1000, 1), NotNcc);
}

TEST_CASE("paths export") {
  Graph g = fixtures::minimal();
  gauss::SampleGrid grid = gauss::SampleGrid::uniform(g, 0.5);
  SamplePath p = sample_natural(g, build_tower(g), grid, gauss::Law::wiener(), {4, 0});
  CHECK(p.values.size() == grid.node_count());
  CHECK(p.values[0] == 0.0);
  std::string csv = path_csv(g, grid, p);
  CHECK(csv.rfind("label,time,value", 0) == 0);
}
