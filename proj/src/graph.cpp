#include "tlg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tlg {

Graph::Graph(std::vector<Vertex> vertices, std::vector<Edge> edges, Mode mode)
    : vertices_(std::move(vertices)), edges_(std::move(edges)), mode_(mode) {
  std::stable_sort(vertices_.begin(), vertices_.end(), [](const Vertex& a, const Vertex& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.id < b.id;
  });
  lookup_.reserve(vertices_.size());
  for (std::size_t v = 0; v < vertices_.size(); ++v) lookup_.emplace_back(vertices_[v].id, v);
  std::sort(lookup_.begin(), lookup_.end());
  for (std::size_t i = 1; i < lookup_.size(); ++i)
    if (lookup_[i].first == lookup_[i - 1].first) duplicate_ids_ = true;

  out_.assign(vertices_.size(), {});
  in_.assign(vertices_.size(), {});
  tail_.assign(edges_.size(), 0);
  head_.assign(edges_.size(), 0);
  dangling_.assign(edges_.size(), false);
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    auto a = find(edges_[e].from);
    auto b = find(edges_[e].to);
    if (!a || !b) {
      dangling_[e] = true;
      continue;
    }
    tail_[e] = *a;
    head_[e] = *b;
    out_[*a].push_back(e);
    in_[*b].push_back(e);
  }
}

std::optional<std::size_t> Graph::find(VertexId id) const {
  auto it = std::lower_bound(lookup_.begin(), lookup_.end(), std::make_pair(id, std::size_t{0}));
  if (it == lookup_.end() || it->first != id) return std::nullopt;
  return it->second;
}

std::size_t Graph::index_of(VertexId id) const {
  auto v = find(id);
  if (!v) throw InvalidGraph("unknown vertex id " + std::to_string(id));
  return *v;
}

std::optional<std::size_t> Graph::find_edge(std::size_t from, std::size_t to, int slot) const {
  for (std::size_t e : out_[from])
    if (head_[e] == to && edges_[e].slot == slot) return e;
  return std::nullopt;
}

std::vector<std::size_t> Graph::edges_between(std::size_t from, std::size_t to) const {
  std::vector<std::size_t> r;
  for (std::size_t e : out_[from])
    if (head_[e] == to) r.push_back(e);
  std::sort(r.begin(), r.end(), [&](std::size_t a, std::size_t b) { return edges_[a].slot < edges_[b].slot; });
  return r;
}

std::size_t Graph::initial() const {
  if (vertices_.empty()) throw InvalidGraph("empty graph");
  return 0;
}

std::size_t Graph::terminal() const {
  if (vertices_.empty()) throw InvalidGraph("empty graph");
  return vertices_.size() - 1;
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].kind << ": " << violations[i].message;
  }
  return os.str();
}

namespace {

void add(ValidationReport& r, std::string kind, std::string msg, std::vector<VertexId> vs = {},
         std::vector<std::size_t> es = {}) {
  r.violations.push_back({std::move(kind), std::move(msg), std::move(vs), std::move(es)});
}

std::string edge_name(const Graph& g, std::size_t e) {
  const Edge& x = g.edge(e);
  std::ostringstream os;
  os << "edge " << e << " (" << x.from << "->" << x.to << ":" << x.slot << ")";
  return os.str();
}

void check_structure(const Graph& g, ValidationReport& r) {
  std::map<VertexId, int> seen;
  for (const Vertex& v : g.vertices()) {
    if (++seen[v.id] == 2) add(r, "duplicate-id", "vertex id " + std::to_string(v.id) + " used twice", {v.id});
    if (!std::isfinite(v.time))
      add(r, "non-finite-time", "vertex " + std::to_string(v.id) + " has a non-finite time", {v.id});
  }
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> pairs;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const Edge& x = g.edge(e);
    if (g.dangling(e)) {
      add(r, "dangling-edge", edge_name(g, e) + " refers to a missing vertex", {}, {e});
      continue;
    }
    if (x.slot != 0 && x.slot != 1) add(r, "bad-slot", edge_name(g, e) + " slot must be 0 or 1", {}, {e});
    if (!(g.time(g.tail(e)) < g.time(g.head(e))))
      add(r, "time-order", edge_name(g, e) + " does not run strictly forward in time", {x.from, x.to}, {e});
    pairs[{g.tail(e), g.head(e)}].push_back(e);
  }
  for (auto& [key, es] : pairs) {
    if (es.size() > 2) {
      add(r, "multiplicity", "more than two edges join " + std::to_string(g.id(key.first)) + " and " +
                                 std::to_string(g.id(key.second)),
          {g.id(key.first), g.id(key.second)}, es);
    } else if (es.size() == 2 && g.edge(es[0]).slot == g.edge(es[1]).slot) {
      add(r, "slot-clash", "parallel edges share a slot", {g.id(key.first), g.id(key.second)}, es);
    }
  }
  r.structural = !r.violations.empty();
}

void check_degrees(const Graph& g, Mode mode, ValidationReport& r) {
  const std::size_t n = g.vertex_count();
  if (n < 2) {
    add(r, "size", "a time-like graph needs at least two vertices");
    return;
  }
  std::size_t first = 0, last = n - 1;
  if (g.time(0) == g.time(1))
    add(r, "initial", "the earliest time is shared by several vertices", {g.id(0), g.id(1)});
  if (g.time(n - 1) == g.time(n - 2))
    add(r, "terminal", "the latest time is shared by several vertices", {g.id(n - 2), g.id(n - 1)});
  if (g.degree(first) != 1 || g.out_edges(first).size() != 1)
    add(r, "initial", "initial vertex " + std::to_string(g.id(first)) + " must have exactly one outgoing edge",
        {g.id(first)});
  if (g.degree(last) != 1 || g.in_edges(last).size() != 1)
    add(r, "terminal", "terminal vertex " + std::to_string(g.id(last)) + " must have exactly one incoming edge",
        {g.id(last)});
  for (std::size_t v = 1; v + 1 < n; ++v) {
    std::size_t d = g.degree(v);
    bool ok_degree = d == 3 || (mode == Mode::relaxed && d == 2);
    if (!ok_degree)
      add(r, "degree", "vertex " + std::to_string(g.id(v)) + " has degree " + std::to_string(d), {g.id(v)});
    if (g.in_edges(v).empty() || g.out_edges(v).empty())
      add(r, "direction", "vertex " + std::to_string(g.id(v)) + " needs both incoming and outgoing edges",
          {g.id(v)});
  }
}

void check_coverage(const Graph& g, ValidationReport& r) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> fwd(n, false), bwd(n, false);
  fwd[0] = true;
  for (std::size_t v = 0; v < n; ++v)
    if (fwd[v])
      for (std::size_t e : g.out_edges(v)) fwd[g.head(e)] = true;
  bwd[n - 1] = true;
  for (std::size_t v = n; v-- > 0;)
    if (bwd[v])
      for (std::size_t e : g.in_edges(v)) bwd[g.tail(e)] = true;
  for (std::size_t v = 0; v < n; ++v)
    if (!fwd[v] || !bwd[v])
      add(r, "coverage", "vertex " + std::to_string(g.id(v)) + " lies on no full time path", {g.id(v)});
}

}  // namespace

ValidationReport validate_tlg(const Graph& graph, Mode mode) {
  ValidationReport r;
  check_structure(graph, r);
  if (r.structural) return r;
  check_degrees(graph, mode, r);
  if (graph.vertex_count() >= 2) check_coverage(graph, r);
  if (mode == Mode::relaxed && r.ok()) {
    ValidationReport inner = validate_tlg(collapse_chains(graph), Mode::strict);
    for (auto& v : inner.violations) {
      v.kind = "collapsed-" + v.kind;
      r.violations.push_back(v);
    }
  }
  return r;
}

void require_valid(const Graph& graph, Mode mode) {
  ValidationReport r = validate_tlg(graph, mode);
  if (!r.ok()) throw InvalidGraph("invalid time-like graph: " + r.summary());
}

void require_valid(const Graph& graph) { require_valid(graph, graph.mode()); }

Graph reverse(const Graph& graph) {
  std::vector<Vertex> vs;
  for (const Vertex& v : graph.vertices()) vs.push_back({v.id, -v.time});
  std::vector<Edge> es;
  for (const Edge& e : graph.edges()) es.push_back({e.to, e.from, e.slot});
  return Graph(std::move(vs), std::move(es), graph.mode());
}

Graph with_mode(const Graph& graph, Mode mode) { return Graph(graph.vertices(), graph.edges(), mode); }

Graph collapse_chains(const Graph& g) {
  const std::size_t n = g.vertex_count();
  auto passes_through = [&](std::size_t v) {
    return v != 0 && v + 1 != n && g.in_edges(v).size() == 1 && g.out_edges(v).size() == 1;
  };
  std::vector<Vertex> vs;
  for (std::size_t v = 0; v < n; ++v)
    if (!passes_through(v)) vs.push_back(g.vertex(v));
  std::vector<Edge> es;
  std::map<std::pair<VertexId, VertexId>, int> used;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (g.dangling(e) || passes_through(g.tail(e))) continue;
    std::size_t cur = e;
    while (passes_through(g.head(cur))) cur = g.out_edges(g.head(cur)).front();
    VertexId a = g.id(g.tail(e)), b = g.id(g.head(cur));
    es.push_back({a, b, used[{a, b}]++});
  }
  return Graph(std::move(vs), std::move(es), Mode::strict);
}

Graph remove_edges(const Graph& g, const std::vector<std::size_t>& drop, Mode mode) {
  std::vector<bool> gone(g.edge_count(), false);
  for (std::size_t e : drop) gone.at(e) = true;
  std::vector<bool> used(g.vertex_count(), false);
  std::vector<Edge> es;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    if (gone[e]) continue;
    es.push_back(g.edge(e));
    if (!g.dangling(e)) used[g.tail(e)] = used[g.head(e)] = true;
  }
  std::vector<Vertex> vs;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (used[v]) vs.push_back(g.vertex(v));
  return Graph(std::move(vs), std::move(es), mode);
}

}  // namespace tlg
