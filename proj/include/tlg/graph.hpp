#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tlg {

using VertexId = long;

struct Vertex {
  VertexId id;
  double time;
};

struct Edge {
  VertexId from;
  VertexId to;
  int slot = 0;
};

enum class Mode { strict, relaxed };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class LimitExceeded : public Error {
 public:
  using Error::Error;
};

// Vertices are kept sorted by (time, id); algorithms work on these indices.
// Edges keep their input order, so an edge index is also its public id.
// Edges with unknown endpoints are kept aside and only show up in validation.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<Vertex> vertices, std::vector<Edge> edges, Mode mode = Mode::strict);

  Mode mode() const { return mode_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }
  const Edge& edge(std::size_t e) const { return edges_[e]; }
  double time(std::size_t v) const { return vertices_[v].time; }
  VertexId id(std::size_t v) const { return vertices_[v].id; }

  std::optional<std::size_t> find(VertexId id) const;
  std::size_t index_of(VertexId id) const;  // throws InvalidGraph

  // endpoints as vertex indices; only meaningful for non-dangling edges
  std::size_t tail(std::size_t e) const { return tail_[e]; }
  std::size_t head(std::size_t e) const { return head_[e]; }
  bool dangling(std::size_t e) const { return dangling_[e]; }

  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }
  std::size_t degree(std::size_t v) const { return out_[v].size() + in_[v].size(); }

  std::optional<std::size_t> find_edge(std::size_t from, std::size_t to, int slot) const;
  std::vector<std::size_t> edges_between(std::size_t from, std::size_t to) const;

  // earliest / latest vertex; throws on an empty graph
  std::size_t initial() const;
  std::size_t terminal() const;

  bool has_duplicate_ids() const { return duplicate_ids_; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  Mode mode_ = Mode::strict;
  std::vector<std::size_t> tail_, head_;
  std::vector<bool> dangling_;
  std::vector<std::vector<std::size_t>> out_, in_;
  std::vector<std::pair<VertexId, std::size_t>> lookup_;
  bool duplicate_ids_ = false;
};

struct Violation {
  std::string kind;
  std::string message;
  std::vector<VertexId> vertices;
  std::vector<std::size_t> edges;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool structural = false;  // problems that make path algorithms meaningless
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_tlg(const Graph& graph, Mode mode);
inline ValidationReport validate_tlg(const Graph& graph) { return validate_tlg(graph, graph.mode()); }

// Throws InvalidGraph with the report summary unless the graph is valid in `mode`.
void require_valid(const Graph& graph, Mode mode);
void require_valid(const Graph& graph);

// Negates times and flips every edge; ids and slots are kept.
Graph reverse(const Graph& graph);

// Removes every internal degree-2 vertex by joining its two edges.
// Slots are reassigned so that parallel results stay distinguishable.
Graph collapse_chains(const Graph& graph);

// Same graph with a different mode tag.
Graph with_mode(const Graph& graph, Mode mode);

// Copy without the listed edges (by index); isolated vertices are dropped.
Graph remove_edges(const Graph& graph, const std::vector<std::size_t>& edges, Mode mode);

}  // namespace tlg
