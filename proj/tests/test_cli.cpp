#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "manifest.hpp"
#include "tlg/fixtures.hpp"
#include "tlg/graph_io.hpp"

using namespace tlg;
using namespace tlg::cli;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out call(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int code = run(args, o, e);
  return {code, o.str(), e.str()};
}

const std::string data = TLG_DATA_DIR;

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("point syntax") {
  Graph g = fixtures::single_cell(-1, 0, 1, 2);
  PointRef v = parse_point(g, "v:2");
  CHECK(v.vertex == g.index_of(2));
  PointRef e = parse_point(g, "e:1-2:1@1/4");
  CHECK_FALSE(e.vertex);
  CHECK(e.edge == *g.find_edge(g.index_of(1), g.index_of(2), 1));
  CHECK(e.time == 0.25);
  CHECK(parse_point(g, "e:1-2@0.5").edge == *g.find_edge(g.index_of(1), g.index_of(2), 0));
  CHECK_THROWS_AS(parse_point(g, "v:9"), UsageError);
  CHECK_THROWS_AS(parse_point(g, "e:1-2@1.5"), UsageError);  // off the edge
  CHECK_THROWS_AS(parse_point(g, "e:1-2@1"), UsageError);    // endpoint, not interior
  CHECK_THROWS_AS(parse_point(g, "e:0-2@0.5"), UsageError);
  CHECK_THROWS_AS(parse_point(g, "x:1"), UsageError);
  CHECK_THROWS_AS(parse_point(g, "e:1-2@abc"), UsageError);
}

TEST_CASE("check exit codes") {
  CHECK(call({"check", data + "/fig1.json"}).code == kOk);
  Out f2 = call({"check", data + "/fig2.json"});
  CHECK(f2.code == kNotNcc);
  CHECK(has(f2.out, "(3,4,6) | (3,5,6)"));
  CHECK(has(f2.out, "(2,4,6) | (2,5,6)"));
  CHECK(call({"check", data + "/malformed.json"}).code == kParse);
  CHECK(call({"check", data + "/missing.json"}).code == kParse);
  CHECK(call({"check", data + "/fig4_pruned.json"}).code == kOk);
  CHECK(call({"check", data + "/fig4_pruned.json", "--mode", "strict"}).code == kInvalid);
  CHECK(call({"check", data + "/fig1.json", "--method", "flow"}).code == kOk);
  CHECK(call({"check", data + "/fig1.json", "--method", "bogus"}).code == kUsage);
  CHECK(call({"check"}).code == kUsage);
  CHECK(call({"frobnicate"}).code == kUsage);
}

TEST_CASE("check writes the tower") {
  const std::string path = "test_cli_tower.json";
  CHECK(call({"check", data + "/fig4.json", "--tower-out", path}).code == kOk);
  nlohmann::json j = read_json_file(path);
  CHECK(j.contains("base"));
  std::remove(path.c_str());
}

TEST_CASE("cov") {
  Out exact = call({"cov", data + "/single_cell.json", "e:1-2:0@1/3", "e:1-2:1@1/2", "--law", "two-sided"});
  CHECK(exact.code == kOk);
  CHECK(has(exact.out, "exact 0.166666666666667 (1/6)"));

  Out mc = call({"cov", data + "/single_cell.json", "e:1-2:0@1/3", "e:1-2:1@1/2", "--law", "two-sided", "--mc",
                 "200000", "--seed", "3"});
  CHECK(mc.code == kOk);
  double est = 0, se = 0;
  std::sscanf(mc.out.c_str(), "mc %lf stderr %lf", &est, &se);
  CHECK(se > 0);
  CHECK(std::abs(est - 1 / 6.0) <= 4 * se);

  CHECK(call({"cov", data + "/single_cell.json", "v:1", "v:2", "--mc", "1000"}).code == kUsage);  // no seed
  CHECK(call({"cov", data + "/single_cell.json", "v:1", "v:2", "--mc", "10", "--seed", "1"}).code == kUsage);
  CHECK(call({"cov", data + "/single_cell.json", "v:1", "v:9"}).code == kUsage);
  CHECK(call({"cov", data + "/single_cell.json", "v:1", "v:2", "--law", "levy"}).code == kUsage);
  CHECK(call({"cov", data + "/malformed.json", "v:1", "v:2"}).code == kParse);

  Out f2 = call({"cov", data + "/fig2.json", "v:4", "v:5", "--exact"});
  CHECK(f2.code == kNotNcc);
  CHECK(has(f2.out, "(11/21)"));
  CHECK(has(f2.out, "(1/2)"));
  CHECK(has(f2.out, "inconsistent"));
  CHECK(call({"cov", data + "/fig2.json", "v:4", "v:5", "--mc", "1000", "--seed", "1"}).code == kNotNcc);
}

TEST_CASE("cov on fig4 matches the engine path with a mesh") {
  Out a = call({"cov", data + "/fig4.json", "v:2", "v:4"});
  Out b = call({"cov", data + "/fig4.json", "v:2", "v:4", "--mesh", "0.01"});
  CHECK(a.code == kOk);
  CHECK(a.out == b.out);
}

TEST_CASE("harness") {
  Out h = call({"harness", data + "/single_cell.json", "--sigma", "0,1,2,3", "--slots", "0,1,0", "--tstar",
                "e:1-2:0@1/2"});
  CHECK(h.code == kOk);
  CHECK(h.out == "vertex,time,probability\n1,0,0.5\n2,1,0.5\n");
  Out third = call({"harness", data + "/single_cell.json", "--sigma", "0,1,2,3", "--slots", "0,1,0", "--tstar",
                    "e:1-2:0@1/3", "--float"});
  CHECK(has(third.out, "1,0,0.66666666666666"));
  CHECK(call({"harness", data + "/single_cell.json", "--sigma", "0,1,2,3", "--slots", "0,1,0", "--tstar",
              "e:1-2:0@1/2", "--level", "2"})
            .code == kUsage);
  CHECK(call({"harness", data + "/single_cell.json", "--sigma", "0,2", "--tstar", "e:1-2:0@1/2"}).code == kUsage);
  CHECK(call({"harness", data + "/single_cell.json", "--sigma", "0,1,2,3", "--tstar", "v:1"}).code == kUsage);
  const std::string levels = "test_cli_levels.json";
  CHECK(call({"harness", data + "/single_cell.json", "--sigma", "0,1,2,3", "--slots", "0,1,0", "--tstar",
              "e:1-2:0@1/2", "--levels-json", levels})
            .code == kOk);
  CHECK_FALSE(read_json_file(levels).is_null());
  std::remove(levels.c_str());
}

TEST_CASE("harness reports a missing support") {
  const std::string path = "test_cli_loop.json";
  save_graph(Graph({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {6, 6}, {7, 7}},
                   {{0, 1, 0}, {1, 6, 0}, {6, 7, 0}, {1, 2, 0}, {2, 3, 0}, {2, 3, 1}, {3, 6, 0}}),
             path);
  Out h = call({"harness", path, "--sigma", "0,1,6,7", "--tstar", "e:1-2@1.5"});
  CHECK(h.code == kNotNcc);
  CHECK(has(h.out, "not a support"));
  std::remove(path.c_str());
}

TEST_CASE("dubins") {
  Out u = call({"dubins", data + "/uniform.json", "--depth", "2"});
  CHECK(u.code == kOk);
  CHECK(has(u.out, "H2: 0.125 0.375 0.625 0.875"));
  CHECK(has(u.out, "w1 0.0625"));
  Out two = call({"dubins", data + "/two_point.json", "-N", "1"});
  CHECK(has(two.out, "w1 0\n"));
  Out v = call({"dubins", data + "/uniform.json", "-N", "8", "--verify-427", "0.5"});
  CHECK(has(v.out, "lhs 0.375 rhs 0.375 diff 0 via engine"));
  const std::string emb = "test_cli_emb.json", tree = "test_cli_tree.json";
  CHECK(call({"dubins", data + "/uniform.json", "-N", "3", "--embed-tlg", emb, "--tree-json", tree}).code == kOk);
  CHECK(call({"check", emb}).code == kOk);
  CHECK(read_json_file(tree).is_object());
  CHECK(call({"dubins", data + "/two_point.json", "-N", "1", "--embed-tlg", emb}).code == kInvalid);
  std::remove(emb.c_str());
  std::remove(tree.c_str());
  CHECK(call({"dubins", data + "/fig1.json", "-N", "2"}).code == kParse);
  CHECK(call({"dubins", data + "/uniform.json"}).code == kUsage);
}

TEST_CASE("honeycomb") {
  Out c = call({"honeycomb", "--chain"});
  CHECK(has(c.out, "stationary 1/8 3/8 3/8 1/8"));
  CHECK(has(c.out, "step_variance rho 1 0.1875"));
  Out t = call({"honeycomb", "--u", "0.5", "--v", "0.5", "--x", "1", "--rhos", "0.4,0.2,0.1"});
  CHECK(t.code == kOk);
  CHECK(t.out.rfind("rho,finite,limit,abs_err,rel_err,cauchy_diff\n", 0) == 0);
  CHECK(has(t.err, "fitted factor"));
  Out z = call({"honeycomb", "--u", "0", "--v", "0.5", "--x", "1", "--rhos", "0.4,0.2"});
  CHECK(has(z.out, "0.4,0,0,0,0,\n"));
  CHECK(call({"honeycomb", "--u", "0.5", "--v", "0.5"}).code == kUsage);
  CHECK(call({"honeycomb", "--u", "0.5", "--v", "0.5", "--x", "1", "--rhos", "0.1,0.2"}).code == kUsage);
  CHECK(call({"honeycomb", "--u", "0.5", "--v", "0.5", "--x", "1", "--scaling", "odd"}).code == kUsage);
}

TEST_CASE("version and manifests") {
  Out v = call({"--version"});
  CHECK(v.code == kOk);
  CHECK(has(v.out, tool_version()));

  const std::string m = "test_cli_manifest.json";
  Out run1 = call({"cov", data + "/single_cell.json", "e:1-2:0@1/3", "e:1-2:1@1/2", "--law", "two-sided", "--mc",
                   "1000", "--seed", "9", "--manifest", m});
  CHECK(run1.code == kOk);
  Manifest man = manifest_from_json(read_json_file(m));
  CHECK(man.command == "cov");
  CHECK(man.seed == 9ULL);
  CHECK(man.stdout_text == run1.out);
  CHECK(man.version == tool_version());
  CHECK(man.inputs.count(data + "/single_cell.json"));
  for (const std::string& a : man.args) CHECK(a != "--manifest");

  Out rep = call({"replay", m});
  CHECK(rep.code == kOk);
  CHECK(has(rep.out, "replay ok"));

  // a manifest for a failing run replays too
  CHECK(call({"check", data + "/fig2.json", "--manifest", m}).code == kNotNcc);
  CHECK(call({"replay", m}).code == kOk);

  nlohmann::json j = read_json_file(m);
  j["stdout"] = "something else\n";
  write_json_file(j, m);
  CHECK(call({"replay", m}).code == kMismatch);

  j["inputs"][data + "/fig2.json"] = "0000000000000000";
  write_json_file(j, m);
  CHECK(call({"replay", m}).code == kParse);

  std::ofstream(m) << "{}";
  CHECK(call({"replay", m}).code == kParse);
  std::remove(m.c_str());
}
