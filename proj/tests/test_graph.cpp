#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "tlg/disjoint_paths.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/generators.hpp"
#include "tlg/graph_io.hpp"
#include "tlg/paths.hpp"

using namespace tlg;

namespace {

std::size_t edge_index(const Graph& g, VertexId a, VertexId b, int slot = 0) {
  return *g.find_edge(g.index_of(a), g.index_of(b), slot);
}

}  // namespace

TEST_CASE("minimal graph is valid") {
  Graph g = fixtures::minimal();
  CHECK(validate_tlg(g).ok());
  CHECK(full_time_paths(g).size() == 1);
}

TEST_CASE("fig1 is valid and every full path runs from t0 to t7") {
  Graph g = fixtures::fig1();
  CHECK(validate_tlg(g).ok());
  auto paths = full_time_paths(g);
  CHECK(!paths.empty());
  for (const TimePath& p : paths) {
    CHECK(g.id(p.front()) == 0);
    CHECK(g.id(p.back()) == 7);
    CHECK(is_full(g, p));
  }
}

TEST_CASE("fig1 without E14 fails strict degree rules") {
  Graph g = fixtures::fig1();
  Graph cut = remove_edges(g, {edge_index(g, 1, 4)}, Mode::strict);
  ValidationReport r = validate_tlg(cut, Mode::strict);
  CHECK_FALSE(r.ok());
  std::set<VertexId> named;
  for (const Violation& v : r.violations) named.insert(v.vertices.begin(), v.vertices.end());
  CHECK(named.count(1));
  CHECK(named.count(4));
}

TEST_CASE("fig2 has four full paths") {
  // by hand: 0-1-2-4-6-7, 0-1-2-5-6-7, 0-1-3-4-6-7, 0-1-3-5-6-7
  Graph g = fixtures::fig2();
  std::set<std::vector<VertexId>> got;
  for (const TimePath& p : full_time_paths(g)) got.insert(path_ids(g, p));
  std::set<std::vector<VertexId>> want = {
      {0, 1, 2, 4, 6, 7}, {0, 1, 2, 5, 6, 7}, {0, 1, 3, 4, 6, 7}, {0, 1, 3, 5, 6, 7}};
  CHECK(got == want);
}

TEST_CASE("validation catches broken graphs") {
  SUBCASE("edge going back in time") {
    Graph g({{0, 0.0}, {1, 1.0}}, {{1, 0, 0}});
    CHECK_FALSE(validate_tlg(g).ok());
  }
  SUBCASE("two vertices at one time") {
    Graph g({{0, 0.0}, {1, 0.5}, {2, 0.5}, {3, 1.0}}, {{0, 1, 0}, {1, 3, 0}, {0, 2, 0}, {2, 3, 0}});
    CHECK_FALSE(validate_tlg(g, Mode::relaxed).ok());
  }
  SUBCASE("duplicate ids") {
    Graph g({{0, 0.0}, {0, 1.0}}, {{0, 0, 0}});
    CHECK_FALSE(validate_tlg(g).ok());
  }
  SUBCASE("dangling edge") {
    Graph g({{0, 0.0}, {1, 1.0}}, {{0, 1, 0}, {0, 9, 0}});
    CHECK_FALSE(validate_tlg(g).ok());
  }
  SUBCASE("require_valid throws") { CHECK_THROWS_AS(require_valid(Graph({{0, 0.0}, {1, 1.0}}, {{1, 0, 0}})), InvalidGraph); }
}

TEST_CASE("parallel edge needs leads in strict mode") {
  Graph bare({{0, 0.0}, {1, 1.0}}, {{0, 1, 0}, {0, 1, 1}});
  CHECK_FALSE(validate_tlg(bare, Mode::strict).ok());
  CHECK(validate_tlg(fixtures::parallel_edge()).ok());
}

TEST_CASE("reverse and collapse keep validity") {
  for (const Graph& g : {fixtures::fig1(), fixtures::fig2(), fixtures::fig4()}) {
    CHECK(validate_tlg(reverse(g)).ok());
    CHECK(reverse(reverse(g)).edge_count() == g.edge_count());
  }
  CHECK(validate_tlg(collapse_chains(fixtures::fig4_pruned()), Mode::relaxed).ok());
}

TEST_CASE("path helpers") {
  Graph g = fixtures::fig2();
  TimePath p = path_from_ids(g, {0, 1, 3, 5, 6, 7});
  CHECK(is_full(g, p));
  CHECK(path_ids(g, p) == std::vector<VertexId>{0, 1, 3, 5, 6, 7});
  TimePath part = path_from_ids(g, {1, 3, 5});
  CHECK(is_time_path(g, part));
  CHECK_FALSE(is_full(g, part));
  CHECK_THROWS(path_from_ids(g, {0, 2}));
}

TEST_CASE("path enumeration respects its limit") {
  PathLimits lim;
  lim.max_paths = 2;
  CHECK_THROWS_AS(full_time_paths(fixtures::fig4(), lim), LimitExceeded);
}

TEST_CASE("reachability matches path enumeration") {
  Graph g = fixtures::fig4();
  Reachability r(g);
  for (std::size_t a = 0; a < g.vertex_count(); ++a) {
    std::set<std::size_t> seen;
    for (const TimePath& p : paths_from(g, a))
      for (std::size_t v : p.vertices) seen.insert(v);
    for (std::size_t b = 0; b < g.vertex_count(); ++b)
      if (b != a) CHECK(r.reaches(a, b) == (seen.count(b) > 0));
  }
}

TEST_CASE("two disjoint paths") {
  Graph g = fixtures::fig2();
  auto pair = two_disjoint_paths(g, g.index_of(1), g.index_of(6));
  REQUIRE(pair);
  std::set<std::size_t> inner;
  for (const TimePath* p : {&pair->first, &pair->second}) {
    CHECK(p->front() == g.index_of(1));
    CHECK(p->back() == g.index_of(6));
    for (std::size_t i = 1; i + 1 < p->vertices.size(); ++i) CHECK(inner.insert(p->vertices[i]).second);
  }
  CHECK_FALSE(two_disjoint_paths(g, g.index_of(0), g.index_of(2)));
  Graph par = fixtures::parallel_edge();
  CHECK(two_disjoint_paths(par, par.index_of(1), par.index_of(2)));
}

TEST_CASE("json round trip") {
  for (const Graph& g : {fixtures::fig1(), fixtures::fig4_pruned(), fixtures::parallel_edge()}) {
    Graph back = graph_from_json(graph_to_json(g));
    CHECK(back.mode() == g.mode());
    REQUIRE(back.vertex_count() == g.vertex_count());
    REQUIRE(back.edge_count() == g.edge_count());
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      CHECK(back.id(v) == g.id(v));
      CHECK(back.time(v) == g.time(v));
    }
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      CHECK(back.edge(e).from == g.edge(e).from);
      CHECK(back.edge(e).to == g.edge(e).to);
      CHECK(back.edge(e).slot == g.edge(e).slot);
    }
  }
}

TEST_CASE("json shape errors are parse errors") {
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"vertices": 3})")), ParseError);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"mode":"odd","vertices":[],"edges":[]})")), ParseError);
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"), ParseError);
  const std::string path = "test_graph_bad.json";
  std::ofstream(path) << "{not json";
  CHECK_THROWS_AS(load_graph(path), ParseError);
  std::remove(path.c_str());
}

TEST_CASE("shipped fixtures load") {
  CHECK(validate_tlg(load_graph(TLG_DATA_DIR "/fig1.json")).ok());
  CHECK(validate_tlg(load_graph(TLG_DATA_DIR "/fig2.json")).ok());
  CHECK(validate_tlg(load_graph(TLG_DATA_DIR "/fig4.json")).ok());
  CHECK(validate_tlg(load_graph(TLG_DATA_DIR "/single_cell.json")).ok());
}

TEST_CASE("generators give valid strict graphs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 30; ++i) {
    CHECK(validate_tlg(gen::random_strict(10, rng), Mode::strict).ok());
    CHECK(validate_tlg(gen::random_ncc(5, 3, rng), Mode::strict).ok());
  }
  std::size_t bad = 0;
  std::size_t n = gen::enumerate_strict(6, [&](const Graph& g) { bad += !validate_tlg(g, Mode::strict).ok(); });
  CHECK(n > 0);
  CHECK(bad == 0);
  CHECK(gen::enumerate_strict(5, [](const Graph&) {}) == 0);  // odd counts cannot be strict
}
