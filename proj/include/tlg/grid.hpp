#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tlg/graph.hpp"

namespace tlg::gauss {

struct SamplePoint {
  std::size_t edge = 0;
  std::size_t index = 0;
  bool operator==(const SamplePoint&) const = default;
};

// Per-edge increasing time lists including both endpoint times. Nodes are
// numbered canonically: graph vertices first (by vertex index), then interior
// points edge by edge.
class SampleGrid {
 public:
  SampleGrid(const Graph& graph, std::vector<std::vector<double>> times);

  static SampleGrid vertices_only(const Graph& graph);
  // every edge cut into equal pieces no longer than h
  static SampleGrid uniform(const Graph& graph, double h);

  // copy with extra interior times; times equal to an existing point are ignored
  SampleGrid with_times(std::size_t edge, const std::vector<double>& extra) const;

  std::size_t edge_count() const { return times_.size(); }
  const std::vector<double>& times(std::size_t edge) const { return times_[edge]; }
  double mesh() const;

  std::size_t node_count() const { return node_count_; }
  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t node(SamplePoint p) const;
  std::size_t vertex_node(std::size_t vertex) const { return vertex; }
  double node_time(std::size_t node) const { return node_time_[node]; }
  bool is_vertex_node(std::size_t node) const { return node < vertex_count_; }
  SamplePoint point_of(std::size_t node) const { return node_point_[node]; }

  // sample point with this time on the edge, within tol
  std::optional<SamplePoint> find(std::size_t edge, double t, double tol = 1e-12) const;
  SamplePoint vertex_point(const Graph& graph, std::size_t vertex) const;

  // "v:<id>" for vertices, "<edge>:<index>" otherwise
  std::string label(const Graph& graph, std::size_t node) const;

 private:
  std::vector<std::vector<double>> times_;
  std::vector<std::size_t> offset_;  // first interior node of each edge
  std::vector<std::size_t> tails_, heads_;
  std::vector<double> node_time_;
  std::vector<SamplePoint> node_point_;
  std::size_t vertex_count_ = 0, node_count_ = 0;
};

}  // namespace tlg::gauss
