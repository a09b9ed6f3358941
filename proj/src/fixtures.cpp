#include "tlg/fixtures.hpp"

#include <algorithm>

namespace tlg::fixtures {

namespace {

Graph on_grid(int n, double denom, const std::vector<std::pair<int, int>>& pairs, Mode mode = Mode::strict) {
  std::vector<Vertex> vs;
  for (int k = 0; k < n; ++k) vs.push_back({k, k / denom});
  std::vector<Edge> es;
  for (auto [a, b] : pairs) es.push_back({a, b, 0});
  return Graph(vs, es, mode);
}

const std::vector<std::pair<int, int>> kFig2 = {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {2, 5},
                                                {3, 4}, {3, 5}, {4, 6}, {5, 6}, {6, 7}};

const std::vector<std::pair<int, int>> kFig4 = {{0, 1}, {1, 4}, {4, 5}, {5, 6},  {6, 7}, {7, 10},
                                                {10, 11}, {1, 2}, {2, 3}, {3, 4}, {3, 6}, {7, 8},
                                                {8, 9},  {9, 10}, {5, 8}, {2, 9}};

std::vector<std::pair<int, int>> without(std::vector<std::pair<int, int>> pairs,
                                         const std::vector<std::pair<int, int>>& drop) {
  for (auto d : drop) pairs.erase(std::find(pairs.begin(), pairs.end(), d));
  return pairs;
}

}  // namespace

Graph minimal() { return Graph({{0, 0.0}, {1, 1.0}}, {{0, 1, 0}}); }

Graph fig1() {
  return on_grid(8, 7.0, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {1, 4}, {2, 5}, {3, 6}});
}

Graph fig2() { return on_grid(8, 7.0, kFig2); }

Graph fig2_shifted() {
  std::vector<Vertex> vs;
  for (int k = 0; k < 8; ++k) vs.push_back({k, k == 2 ? 3 / 7.0 : k / 7.0});
  std::vector<Edge> es;
  for (auto [a, b] : kFig2) es.push_back({a, b, 0});
  return Graph(vs, es);
}

Graph fig4() { return on_grid(12, 11.0, kFig4); }

Graph fig4(const std::vector<double>& times) {
  std::vector<Vertex> vs;
  for (int k = 0; k < 12; ++k) vs.push_back({k, times.at(k)});
  std::vector<Edge> es;
  for (auto [a, b] : kFig4) es.push_back({a, b, 0});
  return Graph(vs, es);
}

Graph fig4_pruned() {
  auto pairs = without(kFig4, {{3, 6}, {2, 3}, {3, 4}});
  std::vector<Vertex> vs;
  for (int k = 0; k < 12; ++k)
    if (k != 3) vs.push_back({k, k / 11.0});
  std::vector<Edge> es;
  for (auto [a, b] : pairs) es.push_back({a, b, 0});
  return Graph(vs, es, Mode::relaxed);
}

Graph fig2_without_34_25() { return on_grid(8, 7.0, without(kFig2, {{3, 4}, {2, 5}}), Mode::relaxed); }

Graph fig2_without_34() { return on_grid(8, 7.0, without(kFig2, {{3, 4}}), Mode::relaxed); }

Graph single_cell(double t_init, double tj, double tn, double t_term) {
  return Graph({{0, t_init}, {1, tj}, {2, tn}, {3, t_term}}, {{0, 1, 0}, {1, 2, 0}, {1, 2, 1}, {2, 3, 0}});
}

Graph parallel_edge() { return single_cell(0.0, 1 / 3.0, 2 / 3.0, 1.0); }

Graph cell_chain(int k) {
  std::vector<Vertex> vs;
  std::vector<Edge> es;
  const int n = 2 * k + 2;
  for (int v = 0; v < n; ++v) vs.push_back({v, v / double(n - 1)});
  es.push_back({0, 1, 0});
  for (int c = 0; c < k; ++c) {
    int a = 1 + 2 * c, b = a + 1;
    es.push_back({a, b, 0});
    es.push_back({a, b, 1});
    if (b + 1 < n) es.push_back({b, b + 1, 0});
  }
  return Graph(vs, es);
}

Graph with_leads(const Graph& g, double gap) {
  std::vector<Vertex> vs = g.vertices();
  std::vector<Edge> es = g.edges();
  VertexId next = 0;
  for (const Vertex& v : vs) next = std::max(next, v.id + 1);
  const Vertex first = g.vertex(g.initial()), last = g.vertex(g.terminal());
  vs.push_back({next, first.time - gap});
  vs.push_back({next + 1, last.time + gap});
  es.push_back({next, first.id, 0});
  es.push_back({last.id, next + 1, 0});
  return Graph(vs, es, g.mode());
}

}  // namespace tlg::fixtures
