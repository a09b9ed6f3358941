#include "tlg/grid.hpp"

#include <algorithm>
#include <cmath>

namespace tlg::gauss {

SampleGrid::SampleGrid(const Graph& g, std::vector<std::vector<double>> times) : times_(std::move(times)) {
  if (times_.size() != g.edge_count()) throw Error("grid needs one time list per edge");
  vertex_count_ = g.vertex_count();
  node_time_.resize(vertex_count_);
  node_point_.resize(vertex_count_);
  for (std::size_t v = 0; v < vertex_count_; ++v) node_time_[v] = g.time(v);
  std::vector<bool> seen(vertex_count_, false);
  std::size_t next = vertex_count_;
  for (std::size_t e = 0; e < times_.size(); ++e) {
    if (g.dangling(e)) throw InvalidGraph("grid on a graph with dangling edges");
    const auto& ts = times_[e];
    if (ts.size() < 2 || ts.front() != g.time(g.tail(e)) || ts.back() != g.time(g.head(e)))
      throw Error("grid times of edge " + std::to_string(e) + " must start and end at its vertex times");
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (!(ts[i - 1] < ts[i])) throw Error("grid times of edge " + std::to_string(e) + " must increase");
    tails_.push_back(g.tail(e));
    heads_.push_back(g.head(e));
    offset_.push_back(next);
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
      node_time_.push_back(ts[i]);
      node_point_.push_back({e, i});
      ++next;
    }
    if (!seen[g.tail(e)]) node_point_[g.tail(e)] = {e, 0};
    seen[g.tail(e)] = true;
  }
  for (std::size_t e = 0; e < times_.size(); ++e)
    if (!seen[heads_[e]]) {
      node_point_[heads_[e]] = {e, times_[e].size() - 1};
      seen[heads_[e]] = true;
    }
  node_count_ = next;
}

SampleGrid SampleGrid::vertices_only(const Graph& g) {
  std::vector<std::vector<double>> ts;
  for (std::size_t e = 0; e < g.edge_count(); ++e) ts.push_back({g.time(g.tail(e)), g.time(g.head(e))});
  return SampleGrid(g, std::move(ts));
}

SampleGrid SampleGrid::uniform(const Graph& g, double h) {
  if (!(h > 0)) throw Error("mesh must be positive");
  std::vector<std::vector<double>> ts;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    double a = g.time(g.tail(e)), b = g.time(g.head(e));
    auto pieces = static_cast<std::size_t>(std::ceil((b - a) / h - 1e-12));
    pieces = std::max<std::size_t>(pieces, 1);
    std::vector<double> row{a};
    for (std::size_t k = 1; k < pieces; ++k) row.push_back(a + (b - a) * double(k) / double(pieces));
    row.push_back(b);
    ts.push_back(std::move(row));
  }
  return SampleGrid(g, std::move(ts));
}

SampleGrid SampleGrid::with_times(std::size_t edge, const std::vector<double>& extra) const {
  // rebuilding needs the graph shape only through tails/heads and vertex times
  std::vector<std::vector<double>> ts = times_;
  auto& row = ts.at(edge);
  for (double t : extra) {
    if (!(t > row.front() && t < row.back())) throw Error("grid time outside the open edge interval");
    if (std::find(row.begin(), row.end(), t) == row.end()) row.push_back(t);
  }
  std::sort(row.begin(), row.end());
  SampleGrid out = *this;
  out.times_ = std::move(ts);
  // renumber interior nodes
  out.node_time_.resize(vertex_count_);
  out.node_point_.resize(vertex_count_);
  out.offset_.clear();
  std::size_t next = vertex_count_;
  for (std::size_t e = 0; e < out.times_.size(); ++e) {
    out.offset_.push_back(next);
    for (std::size_t i = 1; i + 1 < out.times_[e].size(); ++i) {
      out.node_time_.push_back(out.times_[e][i]);
      out.node_point_.push_back({e, i});
      ++next;
    }
  }
  for (std::size_t v = 0; v < vertex_count_; ++v) {
    SamplePoint& p = out.node_point_[v];
    if (p.index != 0) p.index = out.times_[p.edge].size() - 1;
  }
  out.node_count_ = next;
  return out;
}

double SampleGrid::mesh() const {
  double m = 0;
  for (const auto& ts : times_)
    for (std::size_t i = 1; i < ts.size(); ++i) m = std::max(m, ts[i] - ts[i - 1]);
  return m;
}

std::size_t SampleGrid::node(SamplePoint p) const {
  if (p.edge >= times_.size() || p.index >= times_[p.edge].size()) throw Error("sample point outside the grid");
  if (p.index == 0) return tails_[p.edge];
  if (p.index + 1 == times_[p.edge].size()) return heads_[p.edge];
  return offset_[p.edge] + p.index - 1;
}

std::optional<SamplePoint> SampleGrid::find(std::size_t edge, double t, double tol) const {
  const auto& ts = times_.at(edge);
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) <= tol) return SamplePoint{edge, i};
  return std::nullopt;
}

SamplePoint SampleGrid::vertex_point(const Graph&, std::size_t vertex) const { return node_point_.at(vertex); }

std::string SampleGrid::label(const Graph& g, std::size_t node) const {
  if (node < vertex_count_) return "v:" + std::to_string(g.id(node));
  SamplePoint p = node_point_[node];
  return std::to_string(p.edge) + ":" + std::to_string(p.index);
}

}  // namespace tlg::gauss
