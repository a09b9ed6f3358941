#include "tlg/paths.hpp"

#include <algorithm>
#include <functional>

namespace tlg {

bool is_time_path(const Graph& g, const TimePath& p) {
  if (p.vertices.empty() || p.edges.size() + 1 != p.vertices.size()) return false;
  for (std::size_t i = 0; i < p.edges.size(); ++i) {
    std::size_t e = p.edges[i];
    if (e >= g.edge_count() || g.dangling(e)) return false;
    if (g.tail(e) != p.vertices[i] || g.head(e) != p.vertices[i + 1]) return false;
  }
  return true;
}

bool is_full(const Graph& g, const TimePath& p) {
  return is_time_path(g, p) && p.front() == g.initial() && p.back() == g.terminal();
}

TimePath path_from_ids(const Graph& g, const std::vector<VertexId>& ids, const std::vector<int>& slots) {
  if (ids.empty()) throw InvalidGraph("empty path");
  if (!slots.empty() && slots.size() + 1 != ids.size()) throw InvalidGraph("one slot per hop expected");
  TimePath p;
  for (VertexId id : ids) p.vertices.push_back(g.index_of(id));
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    auto es = g.edges_between(p.vertices[i], p.vertices[i + 1]);
    if (es.empty())
      throw InvalidGraph("no edge " + std::to_string(ids[i]) + "->" + std::to_string(ids[i + 1]));
    std::size_t pick = es.front();
    if (!slots.empty()) {
      auto it = std::find_if(es.begin(), es.end(), [&](std::size_t e) { return g.edge(e).slot == slots[i]; });
      if (it == es.end()) throw InvalidGraph("no edge with the requested slot");
      pick = *it;
    }
    p.edges.push_back(pick);
  }
  return p;
}

std::vector<VertexId> path_ids(const Graph& g, const TimePath& p) {
  std::vector<VertexId> r;
  for (std::size_t v : p.vertices) r.push_back(g.id(v));
  return r;
}

std::vector<TimePath> paths_from(const Graph& g, std::size_t from, PathLimits limits) {
  std::vector<TimePath> out;
  TimePath cur;
  cur.vertices.push_back(from);
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    for (std::size_t e : g.out_edges(v)) {
      cur.edges.push_back(e);
      cur.vertices.push_back(g.head(e));
      if (out.size() >= limits.max_paths)
        throw LimitExceeded("time path enumeration exceeded " + std::to_string(limits.max_paths) + " paths");
      out.push_back(cur);
      dfs(g.head(e));
      cur.edges.pop_back();
      cur.vertices.pop_back();
    }
  };
  dfs(from);
  return out;
}

std::vector<TimePath> full_time_paths(const Graph& g, PathLimits limits) {
  require_valid(g);
  std::vector<TimePath> out;
  TimePath cur;
  const std::size_t last = g.terminal();
  cur.vertices.push_back(g.initial());
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    if (v == last) {
      if (out.size() >= limits.max_paths)
        throw LimitExceeded("full path enumeration exceeded " + std::to_string(limits.max_paths) + " paths");
      out.push_back(cur);
      return;
    }
    for (std::size_t e : g.out_edges(v)) {
      cur.edges.push_back(e);
      cur.vertices.push_back(g.head(e));
      dfs(g.head(e));
      cur.edges.pop_back();
      cur.vertices.pop_back();
    }
  };
  dfs(g.initial());
  return out;
}

Reachability::Reachability(const Graph& g) : down_(g.vertex_count(), boost::dynamic_bitset<>(g.vertex_count())) {
  // vertex indices are sorted by time, so reverse index order is a reverse topological order
  for (std::size_t v = g.vertex_count(); v-- > 0;)
    for (std::size_t e : g.out_edges(v)) {
      if (g.dangling(e)) continue;
      down_[v].set(g.head(e));
      down_[v] |= down_[g.head(e)];
    }
}

}  // namespace tlg
