#include "tlg/tower.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tlg {

namespace {

// Represented subgraph during construction.
struct Represented {
  const Graph& g;
  std::vector<bool> edge;
  std::vector<int> degree;

  explicit Represented(const Graph& graph)
      : g(graph), edge(graph.edge_count(), false), degree(graph.vertex_count(), 0) {}

  void add(const TimePath& p) {
    for (std::size_t e : p.edges) {
      edge[e] = true;
      degree[g.tail(e)] += 1;
      degree[g.head(e)] += 1;
    }
  }
  bool complete() const { return std::all_of(edge.begin(), edge.end(), [](bool b) { return b; }); }
  bool has_free_out(std::size_t v) const {
    for (std::size_t e : g.out_edges(v))
      if (!edge[e]) return true;
    return false;
  }
};

std::vector<std::size_t> ordered_out(const Graph& g, std::size_t v) {
  std::vector<std::size_t> es = g.out_edges(v);
  std::sort(es.begin(), es.end(), [&](std::size_t a, std::size_t b) {
    const Edge &x = g.edge(a), &y = g.edge(b);
    if (x.to != y.to) return x.to < y.to;
    return x.slot < y.slot;
  });
  return es;
}

// Time path from a to b using represented edges only.
std::optional<TimePath> represented_path(const Represented& r, std::size_t a, std::size_t b) {
  const Graph& g = r.g;
  std::vector<bool> dead(g.vertex_count(), false);
  TimePath cur;
  cur.vertices.push_back(a);
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    if (v == b) return true;
    for (std::size_t e : ordered_out(g, v)) {
      std::size_t w = g.head(e);
      if (!r.edge[e] || dead[w] || g.time(w) > g.time(b)) continue;
      cur.edges.push_back(e);
      cur.vertices.push_back(w);
      if (dfs(w)) return true;
      cur.edges.pop_back();
      cur.vertices.pop_back();
    }
    dead[v] = true;
    return false;
  };
  if (!dfs(a)) return std::nullopt;
  return cur;
}

// New path from a to b through vertices outside the represented graph.
std::optional<TimePath> fresh_path(const Represented& r, std::size_t a, std::size_t b) {
  const Graph& g = r.g;
  std::vector<bool> dead(g.vertex_count(), false);
  TimePath cur;
  cur.vertices.push_back(a);
  std::function<bool(std::size_t)> dfs = [&](std::size_t v) {
    for (std::size_t e : ordered_out(g, v)) {
      if (r.edge[e]) continue;
      std::size_t w = g.head(e);
      if (w == b) {
        cur.edges.push_back(e);
        cur.vertices.push_back(w);
        return true;
      }
      if (r.degree[w] > 0 || dead[w] || g.time(w) >= g.time(b)) continue;
      cur.edges.push_back(e);
      cur.vertices.push_back(w);
      if (dfs(w)) return true;
      cur.edges.pop_back();
      cur.vertices.pop_back();
    }
    if (v != a) dead[v] = true;
    return false;
  };
  if (!dfs(a)) return std::nullopt;
  return cur;
}

[[noreturn]] void fail_not_ncc(const Graph& g, const std::string& why) {
  NccVerdict v = is_ncc(g);
  if (v.ncc) throw std::logic_error("tower construction failed on an NCC graph: " + why);
  throw NotNcc("graph is not NCC: " + why, v.witness);
}

}  // namespace

Tower build_tower(const Graph& g) {
  require_valid(g);
  Tower tower;
  std::size_t v = g.initial();
  tower.base.vertices.push_back(v);
  while (v != g.terminal()) {
    std::size_t e = ordered_out(g, v).front();
    tower.base.edges.push_back(e);
    v = g.head(e);
    tower.base.vertices.push_back(v);
  }
  Represented r(g);
  r.add(tower.base);

  while (!r.complete()) {
    std::optional<std::size_t> j1;
    for (std::size_t u = 0; u < g.vertex_count(); ++u) {
      if (r.degree[u] != 2 || !r.has_free_out(u)) continue;
      if (!j1 || g.time(u) > g.time(*j1) || (g.time(u) == g.time(*j1) && g.id(u) < g.id(*j1))) j1 = u;
    }
    if (!j1) fail_not_ncc(g, "no represented vertex has a free outgoing edge");

    std::vector<std::size_t> ends = forward_minimal_ends(g, *j1);
    std::sort(ends.begin(), ends.end(), [&](std::size_t a, std::size_t b) { return g.id(a) < g.id(b); });
    bool attached = false;
    for (std::size_t end : ends) {
      if (r.degree[end] != 2) continue;
      auto path = fresh_path(r, *j1, end);
      if (!path) continue;
      auto witness = represented_path(r, *j1, end);
      if (!witness) continue;
      r.add(*path);
      tower.steps.push_back({std::move(*path), std::move(*witness)});
      attached = true;
      break;
    }
    if (!attached)
      fail_not_ncc(g, "forward-minimal end of vertex " + std::to_string(g.id(*j1)) +
                          " cannot be reached inside the represented graph");
  }
  return tower;
}

std::string TowerReport::summary() const {
  if (issues.empty()) return "tower ok";
  std::ostringstream os;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i) os << "; ";
    if (issues[i].step < 0) os << "base";
    else os << "step " << issues[i].step;
    os << ": " << issues[i].message;
  }
  return os.str();
}

TowerReport verify_tower(const Graph& g, const Tower& tower) {
  TowerReport rep;
  auto issue = [&](long step, std::string msg) { rep.issues.push_back({step, std::move(msg)}); };
  if (!validate_tlg(g).ok()) {
    issue(-1, "graph is not a valid time-like graph");
    return rep;
  }
  Represented r(g);
  if (!is_full(g, tower.base)) {
    issue(-1, "base is not a full time path");
    return rep;
  }
  r.add(tower.base);

  for (std::size_t k = 0; k < tower.steps.size(); ++k) {
    const ConstructionStep& s = tower.steps[k];
    const long step = static_cast<long>(k);
    if (!is_time_path(g, s.path) || s.path.edges.empty()) {
      issue(step, "new path is not a time path of the graph");
      continue;
    }
    for (std::size_t e : s.path.edges)
      if (r.edge[e]) {
        issue(step, "edge " + std::to_string(e) + " is already represented");
      }
    for (std::size_t i = 1; i + 1 < s.path.vertices.size(); ++i)
      if (r.degree[s.path.vertices[i]] > 0) {
        issue(step, "interior vertex " + std::to_string(g.id(s.path.vertices[i])) + " is already built");
      }
    for (std::size_t a : {s.attach_low(), s.attach_high()})
      if (r.degree[a] != 2) {
        issue(step, "attachment vertex " + std::to_string(g.id(a)) +
                        (r.degree[a] == 0 ? " is not built yet" : " is not an interior point of a built edge"));
      }
    if (!is_time_path(g, s.witness) || s.witness.front() != s.attach_low() ||
        s.witness.back() != s.attach_high()) {
      issue(step, "witness is not a time path between the attachment points");
    } else {
      for (std::size_t e : s.witness.edges)
        if (!r.edge[e]) {
          issue(step, "witness uses unbuilt edge " + std::to_string(e));
          break;
        }
    }
    r.add(s.path);
  }
  if (!r.complete()) {
    std::ostringstream os;
    os << "edges never built:";
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (!r.edge[e]) os << " " << e;
    issue(static_cast<long>(tower.steps.size()), os.str());
  }
  // an edge built twice leaves the union count off even if every edge is covered
  std::vector<std::size_t> all = tower_edges(tower);
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    issue(static_cast<long>(tower.steps.size()), "some edge is built more than once");
  return rep;
}

Tower tower_from_paths(const Graph& g, const TimePath& base, const std::vector<TimePath>& paths) {
  Tower t;
  t.base = base;
  Represented r(g);
  r.add(base);
  for (const TimePath& p : paths) {
    ConstructionStep s;
    s.path = p;
    if (!p.vertices.empty())
      if (auto w = represented_path(r, p.front(), p.back())) s.witness = *w;
    r.add(p);
    t.steps.push_back(std::move(s));
  }
  return t;
}

std::vector<std::size_t> tower_edges(const Tower& tower) {
  std::vector<std::size_t> es = tower.base.edges;
  for (const auto& s : tower.steps) es.insert(es.end(), s.path.edges.begin(), s.path.edges.end());
  return es;
}

namespace {

struct Search {
  const Graph& g;
  std::mt19937_64& rng;
  std::size_t budget = 200000;

  std::vector<ConstructionStep> options(const Represented& r) {
    std::vector<ConstructionStep> out;
    for (std::size_t a = 0; a < g.vertex_count(); ++a) {
      if (r.degree[a] != 2) continue;
      TimePath cur;
      cur.vertices.push_back(a);
      std::function<void(std::size_t)> dfs = [&](std::size_t v) {
        for (std::size_t e : g.out_edges(v)) {
          if (r.edge[e]) continue;
          std::size_t w = g.head(e);
          cur.edges.push_back(e);
          cur.vertices.push_back(w);
          if (r.degree[w] > 0) {
            if (r.degree[w] == 2)
              if (auto wit = represented_path(r, a, w)) out.push_back({cur, *wit});
          } else {
            dfs(w);
          }
          cur.edges.pop_back();
          cur.vertices.pop_back();
        }
      };
      dfs(a);
    }
    return out;
  }

  bool extend(Represented& r, std::vector<ConstructionStep>& steps) {
    if (r.complete()) return true;
    if (budget == 0) throw LimitExceeded("random tower search budget exhausted");
    --budget;
    auto opts = options(r);
    std::shuffle(opts.begin(), opts.end(), rng);
    for (auto& o : opts) {
      Represented saved = r;
      r.add(o.path);
      steps.push_back(o);
      if (extend(r, steps)) return true;
      steps.pop_back();
      r.edge = saved.edge;
      r.degree = saved.degree;
    }
    return false;
  }
};

}  // namespace

Tower random_tower(const Graph& g, std::mt19937_64& rng) {
  require_valid(g);
  Search search{g, rng};
  for (int attempt = 0; attempt < 64; ++attempt) {
    Tower t;
    std::size_t v = g.initial();
    t.base.vertices.push_back(v);
    while (v != g.terminal()) {
      const auto& out = g.out_edges(v);
      std::size_t e = out[std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng)];
      t.base.edges.push_back(e);
      v = g.head(e);
      t.base.vertices.push_back(v);
    }
    Represented r(g);
    r.add(t.base);
    if (search.extend(r, t.steps)) return t;
  }
  fail_not_ncc(g, "no random tower found");
}

nlohmann::json tower_to_json(const Graph& g, const Tower& tower) {
  nlohmann::json j;
  j["base"] = path_ids(g, tower.base);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : tower.steps)
    j["steps"].push_back({{"path", path_ids(g, s.path)},
                          {"attachLow", g.id(s.attach_low())},
                          {"attachHigh", g.id(s.attach_high())},
                          {"witness", path_ids(g, s.witness)}});
  return j;
}

Tower tower_from_json(const Graph& g, const nlohmann::json& j) {
  std::vector<bool> used(g.edge_count(), false);
  auto resolve = [&](const std::vector<VertexId>& ids, bool claim) {
    TimePath p;
    for (VertexId id : ids) p.vertices.push_back(g.index_of(id));
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
      auto es = g.edges_between(p.vertices[i], p.vertices[i + 1]);
      if (es.empty()) throw InvalidGraph("tower refers to a missing edge " + std::to_string(ids[i]) + "->" +
                                         std::to_string(ids[i + 1]));
      std::size_t pick = es.front();
      if (claim) {
        for (std::size_t e : es)
          if (!used[e]) {
            pick = e;
            break;
          }
        used[pick] = true;
      } else {
        for (std::size_t e : es)
          if (used[e]) {
            pick = e;
            break;
          }
      }
      p.edges.push_back(pick);
    }
    return p;
  };
  try {
    Tower t;
    t.base = resolve(j.at("base").get<std::vector<VertexId>>(), true);
    for (const auto& s : j.at("steps")) {
      ConstructionStep step;
      step.witness = resolve(s.at("witness").get<std::vector<VertexId>>(), false);
      step.path = resolve(s.at("path").get<std::vector<VertexId>>(), true);
      if (s.contains("attachLow") && s.at("attachLow").get<VertexId>() != g.id(step.attach_low()))
        throw InvalidGraph("attachLow does not match the path start");
      if (s.contains("attachHigh") && s.at("attachHigh").get<VertexId>() != g.id(step.attach_high()))
        throw InvalidGraph("attachHigh does not match the path end");
      t.steps.push_back(std::move(step));
    }
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw InvalidGraph(std::string("malformed tower JSON: ") + ex.what());
  }
}

std::string tower_key(const Graph& g, const Tower& tower) {
  std::ostringstream os;
  auto put = [&](const TimePath& p) {
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
      os << g.id(p.vertices[i]);
      if (i < p.edges.size()) os << "-" << g.edge(p.edges[i]).slot << "-";
    }
    os << "|";
  };
  put(tower.base);
  for (const auto& s : tower.steps) {
    put(s.path);
    put(s.witness);
  }
  return os.str();
}

std::uint64_t tower_hash(const Graph& g, const Tower& tower) {
  // FNV-1a keeps the value identical across platforms and builds
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tower_key(g, tower)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace tlg
