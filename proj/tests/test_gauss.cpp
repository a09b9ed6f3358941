#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tlg/field.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/generators.hpp"
#include "tlg/tower.hpp"

using namespace tlg;
using namespace tlg::gauss;
using doctest::Approx;

namespace {

GaussianField field_of(const Graph& g, const SampleGrid& grid, const Law& law = Law::wiener()) {
  return build_field(g, build_tower(g), grid, law);
}

}  // namespace

TEST_CASE("cell formula arithmetic") {
  CHECK(cell_covariance_formula(0, 1 / 3.0, 0.5, 1) == Approx(1 / 6.0).epsilon(1e-15));
  CHECK(cell_covariance_formula(0, 0.5, 0.5, 1) == Approx(0.25));
  CHECK(cell_covariance_formula(0.2, 0.9, 0.4, 0.9) == Approx(0.4));  // tk = tn gives min
}

TEST_CASE("Wiener variance on the minimal graph") {
  Graph g = fixtures::minimal();
  SampleGrid grid = SampleGrid::vertices_only(g).with_times(0, {0.5});
  GaussianField f = field_of(g, grid);
  CHECK(f.variance_node(grid.node(*grid.find(0, 0.5))) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("single cell covariances") {
  // init 0 -> j at 0 would collapse the lead, so shift the whole cell by one
  Graph g = fixtures::single_cell(-1, 0, 1, 2);
  SampleGrid grid = SampleGrid::vertices_only(g).with_times(1, {0.5, 1 / 3.0}).with_times(2, {0.5});
  Law law = Law::wiener(-1.0);
  GaussianField f = field_of(g, grid, law);
  auto node = [&](std::size_t e, double t) { return grid.node(*grid.find(e, t)); };
  // shifted by the origin: tj = 1, tn = 2
  CHECK(f.covariance_nodes(node(1, 0.5), node(2, 0.5)) == Approx(cell_covariance_formula(1, 1.5, 1.5, 2)));
  CHECK(f.covariance_nodes(node(1, 1 / 3.0), node(2, 0.5)) ==
        Approx(cell_covariance_formula(1, 4 / 3.0, 1.5, 2)).epsilon(1e-14));
  // the two-sided law pins time 0 = vertex j, which gives the plain numbers
  GaussianField two = field_of(g, grid, Law::two_sided());
  CHECK(two.covariance_nodes(node(1, 1 / 3.0), node(2, 0.5)) == Approx(1 / 6.0).epsilon(1e-14));
  CHECK(two.covariance_nodes(node(1, 0.5), node(2, 0.5)) == Approx(0.25).epsilon(1e-14));
}

TEST_CASE("engine matches the bridge algebra oracle") {
  std::mt19937_64 rng(21);
  std::vector<Graph> graphs = {fixtures::fig1(), fixtures::fig4(), fixtures::cell_chain(3),
                               fixtures::parallel_edge()};
  for (int i = 0; i < 15; ++i) graphs.push_back(gen::random_ncc(5, 3, rng));
  for (const Graph& g : graphs) {
    Tower t = build_tower(g);
    // one interior point on every edge
    SampleGrid grid = SampleGrid::vertices_only(g);
    std::vector<oracle::EdgeTime> extra;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      const double s = g.time(g.tail(e)), u = g.time(g.head(e));
      const double r = s + (u - s) * 0.37;
      grid = grid.with_times(e, {r});
      extra.push_back({e, r});
    }
    GaussianField f = build_field(g, t, grid, Law::wiener());
    Eigen::MatrixXd want = oracle::tower_covariance(g, t, g.time(g.initial()), extra);
    std::vector<std::size_t> nodes;
    for (std::size_t v = 0; v < g.vertex_count(); ++v) nodes.push_back(v);
    for (const auto& x : extra) nodes.push_back(grid.node(*grid.find(x.edge, x.time)));
    Eigen::MatrixXd got = f.covariance_matrix(nodes);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-sided law against the oracle") {
  Graph g = fixtures::fig4(
      {-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.2, 0.3, 0.5, 0.6, 0.8, 1.0});
  Tower t = build_tower(g);
  GaussianField f = build_field(g, t, SampleGrid::vertices_only(g), Law::two_sided());
  Eigen::MatrixXd want = oracle::tower_covariance(g, t, 0.0, {}, true);
  CHECK((f.covariance_matrix() - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("drift moves the mean only") {
  Graph g = fixtures::fig1();
  SampleGrid grid = SampleGrid::vertices_only(g);
  GaussianField plain = field_of(g, grid), drift = field_of(g, grid, Law::wiener(std::nullopt, 2.0));
  CHECK((plain.covariance_matrix() - drift.covariance_matrix()).cwiseAbs().maxCoeff() < 1e-14);
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    CHECK(drift.mean_node(v) == Approx(2.0 * g.time(v)));
    CHECK(drift.second_moment_nodes(v, v) == Approx(drift.variance_node(v) + 4.0 * g.time(v) * g.time(v)));
  }
}

TEST_CASE("base path points use base basis elements only") {
  Graph g = fixtures::fig4();
  Tower t = build_tower(g);
  SampleGrid grid = SampleGrid::uniform(g, 0.05);
  GaussianField f = build_field(g, t, grid, Law::wiener());
  // basis columns are in construction order; the base path is built first
  std::size_t base_nodes = 0;
  for (std::size_t e : t.base.edges) base_nodes += grid.times(e).size() - 2;
  base_nodes += t.base.vertices.size();
  for (std::size_t v : t.base.vertices) {
    const auto row = f.coefficients().row(static_cast<long>(grid.vertex_node(v)));
    for (long j = static_cast<long>(base_nodes); j < row.size(); ++j) CHECK(row(j) == 0.0);
  }
}

TEST_CASE("conditional coefficients") {
  Graph g = fixtures::parallel_edge();
  const double mid = 0.5;
  SampleGrid grid = SampleGrid::vertices_only(g).with_times(1, {mid});
  GaussianField f = field_of(g, grid);
  const std::size_t m = grid.node(*grid.find(1, mid));
  Conditional c = conditional_coeffs(f, m, {g.index_of(1), g.index_of(2)});
  CHECK(c.weights[0] == Approx(0.5));
  CHECK(c.weights[1] == Approx(0.5));
  // bridge over [1/3, 2/3] at its midpoint
  CHECK(c.residual_variance == Approx((1 / 6.0) * (1 / 6.0) / (1 / 3.0)));
  Conditional self = conditional_coeffs(f, m, {m, g.index_of(1)});
  CHECK(self.weights[0] == Approx(1.0));
  CHECK(self.residual_variance == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("singular conditioning is reported") {
  Graph g = fixtures::fig1();
  GaussianField f = field_of(g, SampleGrid::vertices_only(g));
  // X(t0) = 0 under the Wiener law
  CHECK_THROWS_AS(conditional_coeffs(f, g.index_of(3), {g.index_of(0), g.index_of(2)}), SingularConditioning);
  ConditioningOptions opt;
  opt.allow_pseudo_inverse = true;
  Conditional c = conditional_coeffs(f, g.index_of(3), {g.index_of(0), g.index_of(2)}, opt);
  CHECK(c.pseudo_inverse);
}

TEST_CASE("tower invariance") {
  std::mt19937_64 rng(22);
  for (const Graph& g : {fixtures::fig1(), fixtures::fig4(), fixtures::minimal()}) {
    std::vector<Tower> towers;
    for (int i = 0; i < 5; ++i) towers.push_back(random_tower(g, rng));
    InvarianceReport r = tower_invariance(g, towers, SampleGrid::uniform(g, 0.1), Law::wiener(), 1e-10);
    CHECK(r.pass);
    CHECK(r.max_abs_diff <= 1e-10);
  }
}

TEST_CASE("time-Markov property and its negative control") {
  Graph g = fixtures::minimal();
  SampleGrid grid = SampleGrid::uniform(g, 0.25);
  GaussianField f = field_of(g, grid);
  CHECK(check_time_markov(f, *grid.find(0, 0.5), 1e-10));

  Graph g1 = fixtures::fig1();
  GaussianField f1 = field_of(g1, SampleGrid::vertices_only(g1));
  for (std::size_t v = 1; v < g1.vertex_count(); ++v) CHECK(time_markov_deviation(f1, v, 1e-10).holds);
  const std::size_t v = g1.index_of(4);
  GaussianField bad = f1.with_perturbed_coefficient(v, 1, 0.1);
  CHECK_FALSE(time_markov_deviation(bad, v, 1e-10).holds);
}

TEST_CASE("fig2 cell values") {
  auto [a, b] = fig2_inconsistency();
  CHECK(a == Approx(11 / 21.0).epsilon(1e-15));
  CHECK(b == Approx(0.5).epsilon(1e-15));
  CHECK(a - b == Approx(1 / 42.0).epsilon(1e-14));
  // with t2 = 3/7 the two cells share their start time and the values agree
  auto [c, d] = fig2_inconsistency(3 / 7.0);
  CHECK(c == Approx(d).epsilon(1e-15));
}

TEST_CASE("fields refuse non-NCC graphs") { CHECK_THROWS_AS(field_of(fixtures::fig2(), SampleGrid::vertices_only(fixtures::fig2())), NotNcc); }

TEST_CASE("grid bookkeeping") {
  Graph g = fixtures::fig1();
  SampleGrid grid = SampleGrid::uniform(g, 0.05);
  CHECK(grid.mesh() <= 0.05 + 1e-15);
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    SamplePoint p = grid.point_of(n);
    CHECK(grid.node(p) == n);
  }
  SampleGrid more = grid.with_times(0, {grid.times(0)[1]});
  CHECK(more.node_count() == grid.node_count());
  CHECK(grid.label(g, 0) == "v:0");
}
