#pragma once

#include <cstddef>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "tlg/graph.hpp"

namespace tlg {

// Vertex and edge indices of a time path; edges.size() + 1 == vertices.size().
struct TimePath {
  std::vector<std::size_t> vertices;
  std::vector<std::size_t> edges;

  std::size_t front() const { return vertices.front(); }
  std::size_t back() const { return vertices.back(); }
  bool operator==(const TimePath&) const = default;
};

bool is_full(const Graph& graph, const TimePath& path);
bool is_time_path(const Graph& graph, const TimePath& path);

// Builds a path from vertex ids. Parallel edges are resolved by `slots`
// (one entry per hop) or, when empty, by the lowest slot.
TimePath path_from_ids(const Graph& graph, const std::vector<VertexId>& ids, const std::vector<int>& slots = {});
std::vector<VertexId> path_ids(const Graph& graph, const TimePath& path);

struct PathLimits {
  std::size_t max_paths = 1'000'000;
};

std::vector<TimePath> full_time_paths(const Graph& graph, PathLimits limits = {});

// All time paths of at least one edge leaving `from`.
std::vector<TimePath> paths_from(const Graph& graph, std::size_t from, PathLimits limits = {});

// reaches(a, b): a time path of at least one edge runs from a to b.
class Reachability {
 public:
  explicit Reachability(const Graph& graph);
  bool reaches(std::size_t a, std::size_t b) const { return down_[a].test(b); }
  const boost::dynamic_bitset<>& descendants(std::size_t a) const { return down_[a]; }

 private:
  std::vector<boost::dynamic_bitset<>> down_;
};

}  // namespace tlg
