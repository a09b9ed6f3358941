#include "tlg/cells.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "tlg/disjoint_paths.hpp"

namespace tlg {

namespace {

bool interiors_disjoint(const TimePath& a, const TimePath& b) {
  for (std::size_t i = 1; i + 1 < a.vertices.size(); ++i)
    for (std::size_t j = 1; j + 1 < b.vertices.size(); ++j)
      if (a.vertices[i] == b.vertices[j]) return false;
  return true;
}

bool simple_cell(const Reachability& reach, const TimePath& a, const TimePath& b) {
  for (std::size_t i = 1; i + 1 < a.vertices.size(); ++i)
    for (std::size_t j = 1; j + 1 < b.vertices.size(); ++j) {
      std::size_t u = a.vertices[i], w = b.vertices[j];
      if (reach.reaches(u, w) || reach.reaches(w, u)) return false;
    }
  return true;
}

void order_pair(TimePath& a, TimePath& b) {
  if (b.edges < a.edges) std::swap(a, b);
}

}  // namespace

Cell make_cell(const Graph& g, TimePath a, TimePath b) {
  if (!is_time_path(g, a) || !is_time_path(g, b)) throw InvalidGraph("cell sides must be time paths of the graph");
  if (a.edges.empty() || b.edges.empty()) throw InvalidGraph("cell sides need at least one edge");
  if (a.front() != b.front() || a.back() != b.back()) throw InvalidGraph("cell sides must be co-terminal");
  if (a.edges == b.edges) throw InvalidGraph("cell sides must differ");
  if (!interiors_disjoint(a, b)) throw InvalidGraph("cell sides must have disjoint interiors");
  order_pair(a, b);
  Cell c;
  c.start = a.front();
  c.end = a.back();
  c.a = std::move(a);
  c.b = std::move(b);
  return c;
}

std::vector<Cell> find_cells(const Graph& g, PathLimits limits) {
  require_valid(g);
  Reachability reach(g);
  std::vector<Cell> cells;
  for (std::size_t s = 0; s < g.vertex_count(); ++s) {
    if (g.out_edges(s).size() < 2) continue;
    std::vector<TimePath> ps = paths_from(g, s, limits);
    std::map<std::size_t, std::vector<std::size_t>> by_end;
    for (std::size_t i = 0; i < ps.size(); ++i) by_end[ps[i].back()].push_back(i);
    for (auto& [end, idx] : by_end)
      for (std::size_t x = 0; x < idx.size(); ++x)
        for (std::size_t y = x + 1; y < idx.size(); ++y) {
          const TimePath& p = ps[idx[x]];
          const TimePath& q = ps[idx[y]];
          if (!interiors_disjoint(p, q)) continue;
          if (cells.size() >= limits.max_paths)
            throw LimitExceeded("cell enumeration exceeded " + std::to_string(limits.max_paths) + " cells");
          Cell c = make_cell(g, p, q);
          c.flags.simple = simple_cell(reach, c.a, c.b);
          cells.push_back(std::move(c));
        }
  }
  // minimality straight from the enumeration
  std::map<std::size_t, double> min_end, max_start;
  for (const Cell& c : cells) {
    auto [it, fresh] = min_end.emplace(c.start, g.time(c.end));
    if (!fresh) it->second = std::min(it->second, g.time(c.end));
    auto [jt, fresh2] = max_start.emplace(c.end, g.time(c.start));
    if (!fresh2) jt->second = std::max(jt->second, g.time(c.start));
  }
  for (Cell& c : cells) {
    c.flags.forward_minimal = g.time(c.end) == min_end[c.start];
    c.flags.backward_minimal = g.time(c.start) == max_start[c.end];
  }
  return cells;
}

std::vector<std::size_t> forward_minimal_ends(const Graph& g, std::size_t start) {
  std::vector<std::size_t> ends;
  if (g.out_edges(start).size() < 2) return ends;
  Reachability reach(g);
  double best = 0;
  for (std::size_t t = start + 1; t < g.vertex_count(); ++t) {
    if (!ends.empty() && g.time(t) > best) break;
    if (!reach.reaches(start, t) || g.in_edges(t).size() < 2) continue;
    if (two_disjoint_paths(g, start, t)) {
      best = g.time(t);
      ends.push_back(t);
    }
  }
  return ends;
}

std::vector<std::size_t> backward_minimal_starts(const Graph& g, std::size_t end) {
  std::vector<std::size_t> starts;
  if (g.in_edges(end).size() < 2) return starts;
  Reachability reach(g);
  double best = 0;
  for (std::size_t s = end; s-- > 0;) {
    if (!starts.empty() && g.time(s) < best) break;
    if (!reach.reaches(s, end) || g.out_edges(s).size() < 2) continue;
    if (two_disjoint_paths(g, s, end)) {
      best = g.time(s);
      starts.push_back(s);
    }
  }
  std::sort(starts.begin(), starts.end());
  return starts;
}

std::optional<Cell> cell_between(const Graph& g, std::size_t start, std::size_t end) {
  auto routes = two_disjoint_paths(g, start, end);
  if (!routes) return std::nullopt;
  return make_cell(g, routes->first, routes->second);
}

CellFlags classify_cell(const Graph& g, const Cell& cell) {
  Cell checked = make_cell(g, cell.a, cell.b);  // membership
  Reachability reach(g);
  CellFlags f;
  f.simple = simple_cell(reach, checked.a, checked.b);
  auto ends = forward_minimal_ends(g, checked.start);
  f.forward_minimal = !ends.empty() && g.time(ends.front()) == g.time(checked.end);
  auto starts = backward_minimal_starts(g, checked.end);
  f.backward_minimal = !starts.empty() && g.time(starts.front()) == g.time(checked.start);
  return f;
}

namespace {

struct MinimalCells {
  // forward: start -> ends ; backward: end -> starts
  std::map<std::size_t, std::vector<std::size_t>> forward, backward;
};

MinimalCells minimal_by_flow(const Graph& g) {
  MinimalCells m;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    auto ends = forward_minimal_ends(g, v);
    if (!ends.empty()) m.forward[v] = ends;
    auto starts = backward_minimal_starts(g, v);
    if (!starts.empty()) m.backward[v] = starts;
  }
  return m;
}

MinimalCells minimal_by_enumeration(const Graph& g, PathLimits limits) {
  MinimalCells m;
  std::set<std::pair<std::size_t, std::size_t>> fw, bw;
  for (const Cell& c : find_cells(g, limits)) {
    if (c.flags.forward_minimal) fw.emplace(c.start, c.end);
    if (c.flags.backward_minimal) bw.emplace(c.end, c.start);
  }
  for (auto [s, e] : fw) m.forward[s].push_back(e);
  for (auto [e, s] : bw) m.backward[e].push_back(s);
  return m;
}

// Looks for a key shared by two entries of `from` (inverted), returning the two owners.
std::optional<std::tuple<std::size_t, std::size_t, std::size_t>> shared_target(
    const std::map<std::size_t, std::vector<std::size_t>>& from) {
  std::map<std::size_t, std::vector<std::size_t>> inverse;
  for (auto& [owner, targets] : from)
    for (std::size_t t : targets) inverse[t].push_back(owner);
  for (auto& [t, owners] : inverse)
    if (owners.size() >= 2) return std::make_tuple(t, owners[0], owners[1]);
  return std::nullopt;
}

}  // namespace

NccVerdict is_ncc(const Graph& g, NccOptions options) {
  require_valid(g);
  MinimalCells m;
  NccMethod method = options.method;
  if (method == NccMethod::automatic)
    method = g.vertex_count() <= options.enumeration_vertex_limit ? NccMethod::enumeration : NccMethod::flow;
  if (method == NccMethod::enumeration) {
    try {
      m = minimal_by_enumeration(g, options.limits);
    } catch (const LimitExceeded&) {
      if (options.method == NccMethod::enumeration) throw;
      m = minimal_by_flow(g);
    }
  } else {
    m = minimal_by_flow(g);
  }

  NccVerdict verdict;
  auto witness_cell = [&](std::size_t s, std::size_t e) {
    auto c = cell_between(g, s, e);
    if (!c) throw std::logic_error("minimal cell vanished");
    c->flags = classify_cell(g, *c);
    return *c;
  };
  if (auto hit = shared_target(m.forward)) {
    auto [end, s1, s2] = *hit;
    verdict.ncc = false;
    verdict.direction = "forward";
    verdict.witness = std::make_pair(witness_cell(s2, end), witness_cell(s1, end));
    return verdict;
  }
  if (auto hit = shared_target(m.backward)) {
    auto [start, e1, e2] = *hit;
    verdict.ncc = false;
    verdict.direction = "backward";
    verdict.witness = std::make_pair(witness_cell(start, e1), witness_cell(start, e2));
  }
  return verdict;
}

std::string describe_cell(const Graph& g, const Cell& c) {
  auto side = [&](const TimePath& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.vertices.size(); ++i) os << (i ? "," : "") << g.id(p.vertices[i]);
    os << ")";
    return os.str();
  };
  return side(c.a) + " | " + side(c.b);
}

}  // namespace tlg
