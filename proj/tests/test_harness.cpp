#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlg/dubins.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/harness.hpp"

using namespace tlg;
using namespace tlg::harness;
using doctest::Approx;

namespace {

// cell [0, 1] with leads; sigma is branch B (slot 1), t* on branch A
struct CellCase {
  Graph g = fixtures::single_cell(-1, 0, 1, 2);
  TimePath sigma = path_from_ids(g, {0, 1, 2, 3}, {0, 1, 0});
};

// a double edge hanging off sigma: the component around it has a cycle
Graph loop_graph() {
  return Graph({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {6, 6}, {7, 7}},
               {{0, 1, 0}, {1, 6, 0}, {6, 7, 0}, {1, 2, 0}, {2, 3, 0}, {2, 3, 1}, {3, 6, 0}});
}

}  // namespace

TEST_CASE("support of a single cell") {
  CellCase c;
  SupportDecomposition d = support_check(c.g, c.sigma, {1, 0.5});
  CHECK(d.is_tree);
  CHECK(d.vertices.empty());
  CHECK(d.vertex_count == 3);
  CHECK(d.edge_count == 2);
}

TEST_CASE("fig1 with t* on E14 is decided by counting") {
  Graph g = fixtures::fig1();
  TimePath sigma = path_from_ids(g, {0, 1, 2, 3, 4, 5, 6, 7});
  const std::size_t e = *g.find_edge(g.index_of(1), g.index_of(4), 0);
  SupportDecomposition d = support_check(g, sigma, {e, 2.5 / 7});
  // one edge with both ends on sigma: 3 vertices, 2 edges
  CHECK(d.vertex_count == 3);
  CHECK(d.edge_count == 2);
  CHECK(d.is_tree);
}

TEST_CASE("a cycle off sigma is not a support") {
  Graph g = loop_graph();
  TimePath sigma = path_from_ids(g, {0, 1, 6, 7});
  const std::size_t e = *g.find_edge(g.index_of(1), g.index_of(2), 0);
  SupportDecomposition d = support_check(g, sigma, {e, 1.5});
  CHECK_FALSE(d.is_tree);
  CHECK(d.vertex_count == 5);  // 2, 3, t*, and the ends at 1 and 6
  CHECK(d.edge_count == 5);
  CHECK_THROWS_AS(filtration_levels(g, sigma, e), NotSupported);
}

TEST_CASE("support_check rejects bad input") {
  CellCase c;
  CHECK_THROWS(support_check(c.g, c.sigma, {2, 0.5}));  // t* on sigma
  CHECK_THROWS(support_check(c.g, c.sigma, {1, 1.0}));  // not interior
  CHECK_THROWS(support_check(c.g, path_from_ids(c.g, {1, 2}, {1}), {1, 0.5}));
}

TEST_CASE("filtration of a single cell") {
  CellCase c;
  FiltrationLevels L = filtration_levels(c.g, c.sigma, 1);
  REQUIRE(L.depth() == 1);
  CHECK(L.w[0] == std::vector<std::size_t>{c.g.index_of(1), c.g.index_of(2)});
}

TEST_CASE("walk distributions on a cell") {
  CellCase c;
  AbsorptionDistribution half = walk_distribution(c.g, c.sigma, {1, 0.5}, 1);
  REQUIRE(half.atoms.size() == 2);
  CHECK(half.atoms[0].exact == "1/2");
  CHECK(half.atoms[1].exact == "1/2");
  CHECK(half.total() == 1.0);

  AbsorptionDistribution third = walk_distribution(c.g, c.sigma, {1, 1 / 3.0}, 1);
  CHECK(third.probability_of(c.g.index_of(1)) == Approx(2 / 3.0).epsilon(1e-15));
  CHECK(third.probability_of(c.g.index_of(2)) == Approx(1 / 3.0).epsilon(1e-15));
  CHECK(third.mean_time() == Approx(1 / 3.0).epsilon(1e-15));

  AbsorptionDistribution fl = walk_distribution(c.g, c.sigma, {1, 1 / 3.0}, 1, Arithmetic::floating);
  CHECK(fl.atoms[0].exact.empty());
  CHECK(fl.probability_of(c.g.index_of(1)) == Approx(2 / 3.0).epsilon(1e-15));

  CHECK_THROWS(walk_distribution(c.g, c.sigma, {1, 0.5}, 0));
  CHECK_THROWS(walk_distribution(c.g, c.sigma, {1, 0.5}, 2));
}

TEST_CASE("conditional expectation from weights") {
  CellCase c;
  AbsorptionDistribution d = walk_distribution(c.g, c.sigma, {1, 0.25}, 1);
  CHECK(conditional_expectation(d, [](std::size_t) { return 3.5; }) == Approx(3.5));
  std::map<std::size_t, double> vals = {{c.g.index_of(1), 1.0}, {c.g.index_of(2), 5.0}};
  CHECK(conditional_expectation(d, vals) == Approx(0.75 * 1.0 + 0.25 * 5.0));
  CHECK_THROWS(conditional_expectation(d, std::map<std::size_t, double>{{c.g.index_of(1), 1.0}}));
  auto w = coefficients(d, {c.g.index_of(2), c.g.index_of(0), c.g.index_of(1)});
  CHECK(w[0] == Approx(0.25));
  CHECK(w[1] == 0.0);
  CHECK(w[2] == Approx(0.75));
}

TEST_CASE("Dubins depth-2 graph") {
  dubins::Embedding e = dubins::build_embedding_tlg(dubins::dubins_tree(dubins::Measure::uniform(), 2));
  CHECK(support_check(e.graph, e.sigma, e.t_star).is_tree);
  FiltrationLevels L = filtration_levels(e.graph, e.sigma, e.t_star.edge);
  REQUIRE(L.depth() == 2);
  CHECK(L.w[1].size() == 4);
  // sigma vertices descend to themselves
  for (const auto& [v, n] : L.descendants[0]) {
    bool on_sigma = false;
    for (std::size_t s : e.sigma.vertices) on_sigma = on_sigma || s == v;
    if (on_sigma) CHECK(n == std::vector<std::size_t>{v});
  }
  AbsorptionDistribution d = walk_distribution(e.graph, L, e.t_star, 2);
  CHECK(d.total() == Approx(1.0));
  for (const Atom& a : d.atoms) {
    bool on_sigma = false;
    for (std::size_t s : e.sigma.vertices) on_sigma = on_sigma || s == a.vertex;
    CHECK(on_sigma);
    CHECK(a.probability == Approx(0.25));
  }
  CHECK(d.mean_time() == Approx(0.5));
}

TEST_CASE("walk weights equal Gaussian coefficients") {
  CellCase c;
  for (const LevelComparison& l : compare_with_gaussian(c.g, c.sigma, {1, 0.5}, gauss::Law::wiener())) {
    CHECK(l.max_abs_diff < 1e-12);
    CHECK(l.mean_time_error < 1e-12);
  }
  for (std::size_t depth : {2, 3}) {
    dubins::Embedding e = dubins::build_embedding_tlg(dubins::dubins_tree(dubins::Measure::uniform(), depth));
    auto levels = compare_with_gaussian(e.graph, e.sigma, e.t_star, gauss::Law::wiener());
    CHECK(levels.size() == depth);
    for (const LevelComparison& l : levels) {
      CHECK(l.max_abs_diff < 1e-9);
      CHECK(l.mean_time_error < 1e-12);
    }
  }
}

TEST_CASE("exports") {
  CellCase c;
  AbsorptionDistribution d = walk_distribution(c.g, c.sigma, {1, 0.5}, 1);
  CHECK(weights_csv(c.g, d) == "vertex,time,probability\n1,0,0.5\n2,1,0.5\n");
  nlohmann::json j = levels_json(c.g, filtration_levels(c.g, c.sigma, 1));
  CHECK(j.dump().find("1") != std::string::npos);
}
