#include <algorithm>
#include <map>
#include <set>

#include "tlg/field.hpp"
#include "tlg/grid.hpp"
#include "tlg/honeycomb.hpp"
#include "tlg/sampler.hpp"
#include "tlg/tower.hpp"

namespace tlg::honeycomb {

namespace {

using Key = std::pair<long, long>;  // (h, k)

Key key(LatticePoint p) { return {p.h, p.k}; }

// Builds the window graph from lattice vertices and edges, then gives every
// extra source and sink a lead so that the result is a relaxed TLG.
HexWindow assemble(double rho, const std::set<Key>& verts, const std::set<std::pair<Key, Key>>& edges) {
  HexWindow w;
  w.rho = rho;
  std::map<Key, VertexId> id;
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  for (const Key& k : verts) {
    VertexId i = static_cast<VertexId>(vs.size());
    id[k] = i;
    vs.push_back({i, LatticePoint{k.first, k.second}.time(rho)});
  }
  std::map<Key, int> indeg, outdeg;
  for (const auto& [a, b] : edges) {
    es.push_back({id.at(a), id.at(b), 0});
    ++outdeg[a];
    ++indeg[b];
  }
  std::vector<Key> sources, sinks;
  for (const Key& k : verts) {
    if (indeg[k] == 0) sources.push_back(k);
    if (outdeg[k] == 0) sinks.push_back(k);
  }
  auto by_height = [](const Key& a, const Key& b) { return a.second < b.second || (a.second == b.second && a.first < b.first); };
  std::sort(sources.begin(), sources.end(), by_height);
  std::sort(sinks.begin(), sinks.end(), by_height);

  double t_lo = vs.front().time, t_hi = vs.front().time;
  for (const Vertex& v : vs) {
    t_lo = std::min(t_lo, v.time);
    t_hi = std::max(t_hi, v.time);
  }
  VertexId next = static_cast<VertexId>(vs.size());
  auto fresh = [&](double t) {
    vs.push_back({next, t});
    return next++;
  };
  // sources S_1..S_k: I -> a_1 -> ... -> a_{k-1}, a_i -> S_i, a_{k-1} -> S_k
  const std::size_t ns = sources.size(), nt = sinks.size();
  if (ns == 1) {
    es.push_back({fresh(t_lo - rho), id.at(sources[0]), 0});
  } else if (ns > 1) {
    VertexId prev = fresh(t_lo - rho);
    for (std::size_t i = 0; i + 1 < ns; ++i) {
      VertexId a = fresh(t_lo - rho + rho * static_cast<double>(i + 1) / (2.0 * static_cast<double>(ns)));
      es.push_back({prev, a, 0});
      es.push_back({a, id.at(sources[i]), 0});
      prev = a;
    }
    es.push_back({prev, id.at(sources.back()), 0});
  }
  if (nt == 1) {
    es.push_back({id.at(sinks[0]), fresh(t_hi + rho), 0});
  } else if (nt > 1) {
    VertexId prev = fresh(t_hi + rho);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      VertexId b = fresh(t_hi + rho - rho * static_cast<double>(i + 1) / (2.0 * static_cast<double>(nt)));
      es.push_back({b, prev, 0});
      es.push_back({id.at(sinks[i]), b, 0});
      prev = b;
    }
    es.push_back({id.at(sinks.back()), prev, 0});
  }

  w.graph = Graph(vs, es, Mode::relaxed);
  w.lattice_vertices = verts.size();
  w.coords.assign(w.graph.vertex_count(), std::nullopt);
  for (const auto& [k, i] : id) w.coords[w.graph.index_of(i)] = LatticePoint{k.first, k.second};
  return w;
}

// lattice edge between two vertices, oriented by time
std::pair<Key, Key> oriented(LatticePoint a, LatticePoint b) {
  return a.h < b.h ? std::make_pair(key(a), key(b)) : std::make_pair(key(b), key(a));
}

std::set<std::pair<Key, Key>> induced_edges(const std::set<Key>& verts) {
  std::set<std::pair<Key, Key>> edges;
  for (const Key& k : verts) {
    LatticePoint p{k.first, k.second};
    for (LatticePoint q : neighbours(p))
      if (verts.count(key(q))) edges.insert(oriented(p, q));
  }
  return edges;
}

}  // namespace

std::optional<std::size_t> HexWindow::vertex_at(LatticePoint p) const {
  for (std::size_t v = 0; v < coords.size(); ++v)
    if (coords[v] && *coords[v] == p) return v;
  return std::nullopt;
}

HexWindow hex_cells(double rho, const std::vector<LatticePoint>& cells) {
  if (!(rho > 0.0)) throw WindowError("rho must be positive");
  if (cells.empty()) throw WindowError("no cells");
  std::set<Key> verts;
  std::set<std::pair<Key, Key>> edges;
  for (LatticePoint c : cells) {
    if (!is_vertex(c) || !left_type(c)) throw WindowError("a cell is named by its leftmost vertex");
    const long h = c.h, k = c.k;
    const LatticePoint ring[6] = {{h, k}, {h + 1, k + 1}, {h + 3, k + 1}, {h + 4, k}, {h + 3, k - 1}, {h + 1, k - 1}};
    for (int i = 0; i < 6; ++i) {
      verts.insert(key(ring[i]));
      edges.insert(oriented(ring[i], ring[(i + 1) % 6]));
    }
  }
  return assemble(rho, verts, edges);
}

HexWindow hex_window(const HexWindowSpec& spec) {
  if (!(spec.rho > 0.0) || !(spec.t_max > spec.t_min)) throw WindowError("bad window extent");
  const double unit = spec.rho / 4.0;
  const long h_lo = static_cast<long>(std::ceil(spec.t_min / unit - 1e-9));
  const long h_hi = static_cast<long>(std::floor(spec.t_max / unit + 1e-9));
  std::vector<LatticePoint> cells;
  for (long k = 1; k + 1 <= spec.layers; ++k)
    for (long h = h_lo; h + 4 <= h_hi; ++h) {
      LatticePoint p{h, k};
      if (is_vertex(p) && left_type(p)) cells.push_back(p);
    }
  if (cells.empty()) throw WindowError("extent too small for a single hexagon");
  return hex_cells(spec.rho, cells);
}

LatticePoint nearest_vertex(const HexWindowSpec& spec, double t, double y) {
  if (t < spec.t_min || t > spec.t_max || y < 0.0 || y > static_cast<double>(spec.layers) * layer_height(spec.rho))
    throw WindowError("point outside the window extent");
  return nearest_vertex(spec.rho, t, y);
}

HexWindow descent_window(double rho, LatticePoint top, long h_min, long h_max) {
  if (!is_vertex(top) || top.k < 0) throw WindowError("window top must be a vertex on or above line 0");
  std::map<long, std::pair<long, long>> span;  // layer -> [left, right]
  auto note = [&](LatticePoint p) {
    auto it = span.find(p.k);
    if (it == span.end())
      span[p.k] = {p.h, p.h};
    else
      it->second = {std::min(it->second.first, p.h), std::max(it->second.second, p.h)};
  };
  note(top);
  for (int side = 0; side < 2; ++side) {
    LatticePoint p = top;
    while (p.k > 0) {
      const bool left = left_type(p);
      if (side == 0) {
        if (left) {
          p = {p.h - 2, p.k};
          note(p);
        }
        p = {p.h - 1, p.k - 1};
      } else {
        if (!left) {
          p = {p.h + 2, p.k};
          note(p);
        }
        p = {p.h + 1, p.k - 1};
      }
      note(p);
    }
  }
  // zigzag ends: a left-type vertex on line 0 to the left, a right-type one to the right
  long a = std::min(h_min, span[0].first) - 6, b = std::max(h_max, span[0].second) + 6;
  while (((a % 6) + 6) % 6 != 0) --a;
  while (((b % 6) + 6) % 6 != 4) ++b;

  std::set<Key> verts;
  for (long h = a; h <= b; ++h) {
    if (is_vertex({h, 0})) verts.insert({h, 0});
    if (h > a && h < b && is_vertex({h, -1})) verts.insert({h, -1});
  }
  for (const auto& [k, lr] : span)
    if (k > 0)
      for (long h = lr.first; h <= lr.second; ++h)
        if (is_vertex({h, k})) verts.insert({h, k});
  return assemble(rho, verts, induced_edges(verts));
}

HexMcCheck hex_mc_check(double rho, LatticePoint u_point, LatticePoint v_point, std::size_t n, std::uint64_t seed) {
  HexMcCheck r;
  r.dp = descent_covariance(rho, u_point, v_point);
  HexWindow w = descent_window(rho, v_point, u_point.h, u_point.h);
  r.window_vertices = w.graph.vertex_count();
  const auto iu = w.vertex_at(u_point), iv = w.vertex_at(v_point);
  if (!iu || !iv) throw WindowError("query vertices missing from the window");
  const Tower tower = build_tower(w.graph);
  const gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(w.graph);
  const gauss::Law law = gauss::Law::two_sided();
  gauss::GaussianField field = gauss::build_field(w.graph, tower, grid, law);
  r.engine = field.covariance_nodes(grid.vertex_node(*iu), grid.vertex_node(*iv));
  sampling::NaturalSampler sampler(w.graph, tower, grid, law);
  sampling::McEstimate est = sampling::mc_covariance(sampler, grid.vertex_node(*iu), grid.vertex_node(*iv), n, seed);
  r.mc = est.estimate;
  r.std_error = est.std_error;
  r.n = est.n;
  return r;
}

}  // namespace tlg::honeycomb
