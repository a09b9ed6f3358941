#include "tlg/generators.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tlg::gen {

std::size_t enumerate_strict(int n, const std::function<void(const Graph&)>& visit) {
  if (n < 2) return 0;
  std::vector<Vertex> vs;
  for (int k = 0; k < n; ++k) vs.push_back({k, k / double(n - 1)});
  auto full_degree = [&](int v) { return (v == 0 || v == n - 1) ? 1 : 3; };
  std::vector<int> in(n, 0), mult(n * n, 0);
  std::vector<Edge> es;
  std::size_t count = 0;

  // choose out-neighbours of vertex v as a non-decreasing target list
  std::function<void(int)> place_vertex;
  std::function<void(int, int, int)> choose = [&](int v, int remaining, int min_target) {
    if (remaining == 0) {
      place_vertex(v + 1);
      return;
    }
    for (int w = min_target; w < n; ++w) {
      if (in[w] >= full_degree(w) - (w == n - 1 ? 0 : 1) || mult[v * n + w] >= 2) continue;
      in[w] += 1;
      es.push_back({v, w, mult[v * n + w]});
      mult[v * n + w] += 1;
      choose(v, remaining - 1, w);
      mult[v * n + w] -= 1;
      es.pop_back();
      in[w] -= 1;
    }
  };
  place_vertex = [&](int v) {
    if (v == n - 1) {
      if (in[v] != 1) return;
      Graph g(vs, es);
      if (validate_tlg(g, Mode::strict).ok()) {
        ++count;
        visit(g);
      }
      return;
    }
    int need_in = v == 0 ? 0 : 1;
    if (in[v] < need_in) return;
    choose(v, full_degree(v) - in[v], v + 1);
  };
  place_vertex(0);
  return count;
}

Graph random_strict(int n, std::mt19937_64& rng) {
  if (n < 4 || n % 2) throw Error("random_strict needs an even vertex count of at least 4");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int attempt = 0; attempt < 100000; ++attempt) {
    std::vector<double> times(n);
    for (double& t : times) t = unit(rng);
    std::sort(times.begin(), times.end());
    // half of the internal vertices take two incoming edges; vertex 1 can only
    // be fed by vertex 0 and vertex n-2 can only feed the terminal
    std::vector<int> in(n, 1);
    in[0] = 0;
    std::vector<int> middle;
    for (int v = 2; v + 2 < n; ++v) middle.push_back(v);
    std::shuffle(middle.begin(), middle.end(), rng);
    if (n > 4) in[n - 2] = 2;
    for (int k = 0; k + 1 < (n - 2) / 2 && k < int(middle.size()); ++k) in[middle[k]] = 2;
    if (n == 4) in[2] = 2;
    std::vector<int> out(n);
    out[0] = 1;
    for (int v = 1; v + 1 < n; ++v) out[v] = 3 - in[v];

    std::vector<int> open = in;
    std::vector<Edge> es;
    std::map<std::pair<int, int>, int> mult;
    bool ok = true;
    for (int v = 0; v + 1 < n && ok; ++v) {
      int left = out[v];
      // whatever vertex v+1 still lacks must come from v
      while (open[v + 1] > 0 && left > 0 && mult[{v, v + 1}] < 2) {
        es.push_back({v, v + 1, mult[{v, v + 1}]++});
        open[v + 1] -= 1;
        left -= 1;
      }
      if (open[v + 1] > 0) {
        ok = false;
        break;
      }
      for (; left > 0; --left) {
        std::vector<int> cand;
        for (int w = v + 2; w < n; ++w)
          if (open[w] > 0 && mult[{v, w}] < 2) cand.push_back(w);
        if (cand.empty()) {
          ok = false;
          break;
        }
        int w = cand[std::uniform_int_distribution<std::size_t>(0, cand.size() - 1)(rng)];
        open[w] -= 1;
        es.push_back({v, w, mult[{v, w}]++});
      }
    }
    if (!ok) continue;
    std::vector<Vertex> vs;
    for (int v = 0; v < n; ++v) vs.push_back({v, times[v]});
    Graph g(vs, es);
    if (validate_tlg(g, Mode::strict).ok()) return g;
  }
  throw Error("random_strict: no valid graph found");
}

namespace {

Graph grow(int steps, int max_new, std::mt19937_64& rng) {
  std::map<VertexId, double> time{{0, 0.0}, {1, 1.0}};
  std::vector<std::pair<VertexId, VertexId>> edges{{0, 1}};
  VertexId next = 2;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto between = [&](double a, double b) {
    double t = a + (b - a) * unit(rng);
    return (t > a && t < b) ? t : 0.5 * (a + b);
  };
  auto split = [&](std::size_t e, double t) {
    VertexId v = next++;
    time[v] = t;
    auto [a, b] = edges[e];
    edges[e] = {a, v};
    edges.push_back({v, b});
    return v;
  };
  for (int s = 0; s < steps; ++s) {
    std::size_t e1 = std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng);
    // edges whose tail is reachable from the head of e1
    std::set<VertexId> reach{edges[e1].second};
    bool grew = true;
    while (grew) {
      grew = false;
      for (auto [a, b] : edges)
        if (reach.count(a) && !reach.count(b)) grew = reach.insert(b).second || grew;
    }
    std::vector<std::size_t> later{e1};
    for (std::size_t e = 0; e < edges.size(); ++e)
      if (e != e1 && reach.count(edges[e].first)) later.push_back(e);
    std::size_t e2 = later[std::uniform_int_distribution<std::size_t>(0, later.size() - 1)(rng)];
    double ta = between(time[edges[e1].first], time[edges[e1].second]);
    VertexId a = split(e1, ta);
    VertexId b;
    if (e2 == e1) {
      std::size_t tail_part = edges.size() - 1;  // a -> old head
      b = split(tail_part, between(ta, time[edges[tail_part].second]));
    } else {
      b = split(e2, between(time[edges[e2].first], time[edges[e2].second]));
    }
    int m = std::uniform_int_distribution<int>(0, max_new)(rng);
    std::vector<double> ts;
    for (int k = 0; k < m; ++k) ts.push_back(between(time[a], time[b]));
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    VertexId prev = a;
    for (double t : ts) {
      if (!(t > time[prev]) || !(t < time[b])) continue;
      VertexId v = next++;
      time[v] = t;
      edges.push_back({prev, v});
      prev = v;
    }
    edges.push_back({prev, b});
  }
  std::vector<Vertex> vs;
  for (auto [id, t] : time) vs.push_back({id, t});
  std::vector<Edge> es;
  std::map<std::pair<VertexId, VertexId>, int> mult;
  for (auto [a, b] : edges) es.push_back({a, b, mult[{a, b}]++});
  return Graph(vs, es);
}

}  // namespace

Graph random_ncc(int steps, int max_new, std::mt19937_64& rng) {
  // fresh path vertices have degree 2 unless a later step lands on them
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Graph g = collapse_chains(grow(steps, max_new, rng));
    if (validate_tlg(g, Mode::strict).ok()) return g;
  }
  throw Error("random_ncc: no strict graph found");
}

}  // namespace tlg::gen
