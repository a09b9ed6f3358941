#include "tlg/graph_io.hpp"

#include <fstream>
#include <limits>

namespace tlg {

using nlohmann::json;

json graph_to_json(const Graph& graph) {
  json j;
  j["mode"] = graph.mode() == Mode::strict ? "strict" : "relaxed";
  j["vertices"] = json::array();
  for (const Vertex& v : graph.vertices()) j["vertices"].push_back({{"id", v.id}, {"time", v.time}});
  j["edges"] = json::array();
  for (const Edge& e : graph.edges()) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"slot", e.slot}});
  return j;
}

namespace {

double read_time(const json& t) {
  if (t.is_number()) return t.get<double>();
  // JSON has no infinities; accept the usual spellings so validation can reject them
  if (t.is_string()) {
    std::string s = t.get<std::string>();
    if (s == "inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity") return -std::numeric_limits<double>::infinity();
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  }
  throw ParseError("vertex time must be a number");
}

}  // namespace

Graph graph_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("graph must be a JSON object");
    Mode mode = Mode::strict;
    if (j.contains("mode")) {
      std::string m = j.at("mode").get<std::string>();
      if (m == "strict") mode = Mode::strict;
      else if (m == "relaxed") mode = Mode::relaxed;
      else throw ParseError("unknown mode '" + m + "'");
    }
    std::vector<Vertex> vs;
    for (const json& v : j.at("vertices")) vs.push_back({v.at("id").get<VertexId>(), read_time(v.at("time"))});
    std::vector<Edge> es;
    for (const json& e : j.at("edges"))
      es.push_back({e.at("from").get<VertexId>(), e.at("to").get<VertexId>(), e.value("slot", 0)});
    return Graph(std::move(vs), std::move(es), mode);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed graph JSON: ") + ex.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ParseError(path + ": " + ex.what());
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Graph load_graph(const std::string& path) { return graph_from_json(read_json_file(path)); }

void save_graph(const Graph& graph, const std::string& path) { write_json_file(graph_to_json(graph), path); }

}  // namespace tlg
