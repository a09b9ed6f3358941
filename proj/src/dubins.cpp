#include "tlg/dubins.hpp"

#include <algorithm>
#include <cmath>

#include "tlg/field.hpp"
#include "tlg/grid.hpp"
#include "tlg/tower.hpp"

namespace tlg::dubins {

std::pair<Measure, Measure> split(const Measure& mu) {
  if (mu.point_mass()) return {mu, mu};
  const double m = mu.mean();
  return {mu.restrict(0.0, m, false).normalized(), mu.restrict(m, 1.0, true).normalized()};
}

std::vector<double> DubinsTree::h(std::size_t n) const {
  std::vector<double> out;
  for (std::size_t i : levels.at(n)) out.push_back(nodes[i].mean);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

DubinsTree dubins_tree(const Measure& mu, std::size_t depth) {
  DubinsTree t;
  DubinsNode root;
  root.measure = mu.normalized();
  root.mean = mu.mean();
  root.mass = 1.0;
  root.degenerate = mu.point_mass();
  t.nodes.push_back(root);
  t.levels.push_back({0});
  for (std::size_t n = 1; n <= depth; ++n) {
    std::vector<std::size_t> next;
    for (std::size_t i : t.levels[n - 1]) {
      if (t.nodes[i].degenerate) {
        t.nodes[i].left = t.nodes[i].right = static_cast<long>(i);
        next.push_back(i);
        continue;
      }
      const double m = t.nodes[i].measure.mean();
      Measure lo = t.nodes[i].measure.restrict(0.0, m, false), hi = t.nodes[i].measure.restrict(m, 1.0, true);
      for (int side = 0; side < 2; ++side) {
        const Measure& part = side == 0 ? lo : hi;
        DubinsNode c;
        c.measure = part.normalized();
        c.mean = c.measure.mean();
        c.mass = t.nodes[i].mass * part.total();
        c.level = n;
        c.parent = static_cast<long>(i);
        c.degenerate = c.measure.point_mass();
        const long idx = static_cast<long>(t.nodes.size());
        if (side == 0)
          t.nodes[i].left = idx;
        else
          t.nodes[i].right = idx;
        t.nodes.push_back(std::move(c));
        next.push_back(static_cast<std::size_t>(idx));
      }
    }
    t.levels.push_back(std::move(next));
  }
  return t;
}

Measure embedded_measure(const DubinsTree& tree, std::size_t n) {
  if (n > tree.depth()) throw Error("level beyond the tree depth");
  std::vector<double> prob(tree.nodes.size(), 0.0);
  prob[0] = 1.0;
  for (std::size_t level = 1; level <= n; ++level) {
    std::vector<double> next(tree.nodes.size(), 0.0);
    for (std::size_t i : tree.levels[level - 1]) {
      const DubinsNode& node = tree.nodes[i];
      if (node.degenerate) {
        next[i] += prob[i];
        continue;
      }
      const DubinsNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const DubinsNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
      const double up = (node.mean - l.mean) / (r.mean - l.mean);
      next[static_cast<std::size_t>(node.right)] += prob[i] * up;
      next[static_cast<std::size_t>(node.left)] += prob[i] * (1.0 - up);
    }
    prob = std::move(next);
  }
  std::vector<Point> atoms;
  for (std::size_t i : tree.levels[n])
    if (prob[i] > 0.0) atoms.push_back({tree.nodes[i].mean, prob[i]});
  // the ruin weights sum to 1 only up to rounding
  double s = 0.0;
  for (const Point& p : atoms) s += p.w;
  for (Point& p : atoms) p.w /= s;
  return Measure(std::move(atoms));
}

Embedding build_embedding_tlg(const DubinsTree& tree, std::size_t n) {
  if (n == 0 || n > tree.depth()) throw Error("embedding depth must lie in 1..tree depth");
  const DubinsNode& root = tree.nodes[0];
  if (root.degenerate) throw Error("a point mass has no cell structure to embed");
  if (root.mean <= 0.0 || root.mean >= 1.0) throw Error("mean at 0 or 1");

  std::vector<Vertex> vs;
  std::vector<Edge> es;
  std::vector<std::size_t> leaves;
  const VertexId terminal_id = static_cast<VertexId>(tree.nodes.size()) + 1;
  vs.push_back({0, 0.0});
  vs.push_back({terminal_id, 1.0});
  auto id_of = [](std::size_t node) { return static_cast<VertexId>(node) + 1; };
  auto join = [&](std::size_t a, std::size_t b) {
    const DubinsNode &x = tree.nodes[a], &y = tree.nodes[b];
    if (x.mean < y.mean)
      es.push_back({id_of(a), id_of(b), 0});
    else
      es.push_back({id_of(b), id_of(a), 0});
  };

  for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
    const DubinsNode& node = tree.nodes[i];
    if (node.level > n) continue;
    vs.push_back({id_of(i), node.mean});
    const bool leaf = node.degenerate || node.level == n;
    if (leaf) {
      if (node.mean <= 0.0 || node.mean >= 1.0)
        throw Error("leaf at time " + std::to_string(node.mean) + " cannot sit strictly inside sigma");
      leaves.push_back(i);
    } else {
      join(i, static_cast<std::size_t>(node.left));
      join(i, static_cast<std::size_t>(node.right));
    }
  }
  const std::size_t t_edge = es.size();
  join(static_cast<std::size_t>(root.left), static_cast<std::size_t>(root.right));

  std::sort(leaves.begin(), leaves.end(),
            [&](std::size_t a, std::size_t b) { return tree.nodes[a].mean < tree.nodes[b].mean; });
  std::vector<VertexId> sigma_ids{0};
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (k > 0 && tree.nodes[leaves[k]].mean == tree.nodes[leaves[k - 1]].mean)
      throw Error("two leaves share the time " + std::to_string(tree.nodes[leaves[k]].mean));
    sigma_ids.push_back(id_of(leaves[k]));
  }
  sigma_ids.push_back(terminal_id);
  // a sigma edge may run parallel to a tree edge (two leaves under one node)
  std::vector<int> sigma_slots;
  for (std::size_t k = 0; k + 1 < sigma_ids.size(); ++k) {
    int slot = 0;
    for (const Edge& e : es)
      if (e.from == sigma_ids[k] && e.to == sigma_ids[k + 1]) slot = std::max(slot, e.slot + 1);
    es.push_back({sigma_ids[k], sigma_ids[k + 1], slot});
    sigma_slots.push_back(slot);
  }

  Embedding emb;
  emb.graph = Graph(std::move(vs), std::move(es), Mode::strict);
  require_valid(emb.graph, Mode::strict);
  emb.sigma = path_from_ids(emb.graph, sigma_ids, sigma_slots);
  emb.t_star = {t_edge, root.mean};
  emb.node_vertex.assign(tree.nodes.size(), -1);
  for (std::size_t i = 1; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].level <= n) emb.node_vertex[i] = static_cast<long>(emb.graph.index_of(id_of(i)));
  return emb;
}

namespace {

double engine_lhs(const Embedding& emb, double u) {
  const Graph& g = emb.graph;
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g).with_times(emb.t_star.edge, {emb.t_star.time});
  std::optional<std::size_t> u_vertex, u_edge;
  for (std::size_t v : emb.sigma.vertices)
    if (g.time(v) == u) u_vertex = v;
  if (!u_vertex)
    for (std::size_t e : emb.sigma.edges)
      if (g.time(g.tail(e)) < u && u < g.time(g.head(e))) u_edge = e;
  if (u_edge) grid = grid.with_times(*u_edge, {u});
  const Tower tower = build_tower(g);
  gauss::GaussianField field = gauss::build_field(g, tower, grid, gauss::Law::wiener(0.0));
  const std::size_t a = grid.node(*grid.find(emb.t_star.edge, emb.t_star.time));
  const std::size_t b = u_vertex ? grid.vertex_node(*u_vertex) : grid.node(*grid.find(*u_edge, u));
  return field.second_moment_nodes(a, b);
}

}  // namespace

SecondMoment verify_second_moment(const Measure& mu, std::size_t depth, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw Error("u must lie in [0, 1]");
  if (depth == 0) throw Error("depth must be at least 1");
  DubinsTree tree = dubins_tree(mu, depth);
  SecondMoment r;
  r.rhs = mu.first_moment_to(u) + u * mu.mass_above(u);
  Measure emb_mu = embedded_measure(tree, depth);
  for (const Point& p : emb_mu.atoms()) r.lhs_weights += p.w * std::min(p.x, u);
  std::optional<Embedding> emb;
  try {
    emb = build_embedding_tlg(tree, depth);
  } catch (const Error& e) {
    r.note = e.what();
  }
  if (emb) {
    r.lhs = engine_lhs(*emb, u);
    r.method = "engine";
  } else {
    r.lhs = r.lhs_weights;
    r.method = "weights";
  }
  r.diff = std::abs(r.lhs - r.rhs);
  return r;
}

namespace {

nlohmann::json node_json(const DubinsTree& tree, std::size_t i, std::size_t levels_left) {
  const DubinsNode& node = tree.nodes[i];
  nlohmann::json j{{"mean", node.mean}, {"mass", node.mass}, {"level", node.level}, {"degenerate", node.degenerate}};
  if (!node.degenerate && node.left >= 0 && levels_left > 0) {
    j["left"] = node_json(tree, static_cast<std::size_t>(node.left), levels_left - 1);
    j["right"] = node_json(tree, static_cast<std::size_t>(node.right), levels_left - 1);
  }
  return j;
}

}  // namespace

nlohmann::json tree_to_json(const DubinsTree& tree) {
  nlohmann::json j;
  j["depth"] = tree.depth();
  j["levels"] = nlohmann::json::array();
  for (std::size_t n = 0; n <= tree.depth(); ++n) j["levels"].push_back(tree.h(n));
  j["root"] = node_json(tree, 0, tree.depth());
  return j;
}

}  // namespace tlg::dubins
