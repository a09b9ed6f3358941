#include "tlg/disjoint_paths.hpp"

#include <deque>
#include <limits>

namespace tlg {

namespace {

struct Arc {
  std::size_t to;
  int cap;
  std::size_t rev;
  long edge;  // graph edge carried by this arc, -1 for vertex splits and reverse arcs
};

struct Network {
  std::vector<std::vector<Arc>> adj;

  void link(std::size_t a, std::size_t b, int cap, long edge) {
    adj[a].push_back({b, cap, adj[b].size(), edge});
    adj[b].push_back({a, 0, adj[a].size() - 1, -1});
  }

  bool augment(std::size_t src, std::size_t dst) {
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::pair<std::size_t, std::size_t>> via(adj.size(), {none, none});
    std::deque<std::size_t> queue{src};
    via[src] = {src, 0};
    while (!queue.empty() && via[dst].first == none) {
      std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < adj[x].size(); ++i) {
        const Arc& a = adj[x][i];
        if (a.cap > 0 && via[a.to].first == none) {
          via[a.to] = {x, i};
          queue.push_back(a.to);
        }
      }
    }
    if (via[dst].first == none) return false;
    for (std::size_t y = dst; y != src;) {
      auto [x, i] = via[y];
      Arc& a = adj[x][i];
      a.cap -= 1;
      adj[y][a.rev].cap += 1;
      y = x;
    }
    return true;
  }
};

}  // namespace

std::optional<std::pair<TimePath, TimePath>> two_disjoint_paths(const Graph& g, std::size_t s, std::size_t t) {
  if (!(g.time(s) < g.time(t)) || g.out_edges(s).size() < 1 || g.in_edges(t).size() < 2) return std::nullopt;
  // only vertices inside the time window [time(s), time(t)] can be used; indices s..t cover them
  const std::size_t lo = s, hi = t;
  auto in_node = [&](std::size_t v) { return 2 * (v - lo); };
  auto out_node = [&](std::size_t v) { return 2 * (v - lo) + 1; };
  Network net;
  net.adj.resize(2 * (hi - lo + 1));
  for (std::size_t v = lo; v <= hi; ++v) net.link(in_node(v), out_node(v), (v == s || v == t) ? 2 : 1, -1);
  for (std::size_t v = lo; v < hi; ++v)
    for (std::size_t e : g.out_edges(v))
      if (g.head(e) <= hi) net.link(out_node(v), in_node(g.head(e)), 1, static_cast<long>(e));

  const std::size_t src = out_node(s), dst = in_node(t);
  if (!net.augment(src, dst) || !net.augment(src, dst)) return std::nullopt;

  // decompose: each saturated edge arc out of s starts one route
  std::vector<TimePath> routes;
  for (Arc& first : net.adj[src]) {
    if (first.edge < 0 || first.cap != 0) continue;
    TimePath p;
    p.vertices.push_back(s);
    std::size_t e = static_cast<std::size_t>(first.edge);
    while (true) {
      p.edges.push_back(e);
      std::size_t v = g.head(e);
      p.vertices.push_back(v);
      if (v == t) break;
      long next = -1;
      for (Arc& a : net.adj[out_node(v)])
        if (a.edge >= 0 && a.cap == 0) {
          next = a.edge;
          break;
        }
      e = static_cast<std::size_t>(next);
    }
    routes.push_back(std::move(p));
  }
  return std::make_pair(routes[0], routes[1]);
}

}  // namespace tlg
