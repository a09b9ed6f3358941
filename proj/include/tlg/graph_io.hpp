#pragma once

#include <string>

#include <json.hpp>

#include "tlg/graph.hpp"

namespace tlg {

class ParseError : public Error {
 public:
  using Error::Error;
};

nlohmann::json graph_to_json(const Graph& graph);
// Shape errors raise ParseError; semantic problems are left to validate_tlg.
Graph graph_from_json(const nlohmann::json& j);

Graph load_graph(const std::string& path);
void save_graph(const Graph& graph, const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace tlg
