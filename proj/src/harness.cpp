#include "tlg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "tlg/field.hpp"
#include "tlg/grid.hpp"
#include "tlg/tower.hpp"

namespace tlg::harness {

namespace {

using Rational = boost::multiprecision::cpp_rational;

std::vector<bool> vertex_mask(const Graph& g, const TimePath& sigma) {
  std::vector<bool> on(g.vertex_count(), false);
  for (std::size_t v : sigma.vertices) on[v] = true;
  return on;
}

void check_inputs(const Graph& g, const TimePath& sigma, EdgePoint t) {
  if (!is_full(g, sigma)) throw Error("sigma is not a full time path");
  if (t.edge >= g.edge_count() || g.dangling(t.edge)) throw Error("t* names an unknown edge");
  if (std::find(sigma.edges.begin(), sigma.edges.end(), t.edge) != sigma.edges.end())
    throw Error("t* lies on sigma");
  double a = g.time(g.tail(t.edge)), b = g.time(g.head(t.edge));
  if (!(t.time > a && t.time < b)) throw Error("t* is not interior to its edge");
}

std::size_t other_end(const Graph& g, std::size_t e, std::size_t v) { return g.tail(e) == v ? g.head(e) : g.tail(e); }

}  // namespace

SupportDecomposition support_check(const Graph& g, const TimePath& sigma, EdgePoint t) {
  check_inputs(g, sigma, t);
  const std::vector<bool> on = vertex_mask(g, sigma);
  std::vector<bool> sigma_edge(g.edge_count(), false);
  for (std::size_t e : sigma.edges) sigma_edge[e] = true;

  SupportDecomposition d;
  d.sigma = sigma;
  d.t_star = t;

  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> stack;
  for (std::size_t v : {g.tail(t.edge), g.head(t.edge)})
    if (!on[v] && !seen[v]) {
      seen[v] = true;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    d.vertices.push_back(v);
    auto visit = [&](std::size_t e) {
      if (sigma_edge[e] || e == t.edge) return;
      std::size_t w = other_end(g, e, v);
      if (!on[w] && !seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    };
    for (std::size_t e : g.out_edges(v)) visit(e);
    for (std::size_t e : g.in_edges(v)) visit(e);
  }
  std::sort(d.vertices.begin(), d.vertices.end());

  std::set<std::size_t> edges{t.edge};
  for (std::size_t v : d.vertices) {
    for (std::size_t e : g.out_edges(v)) edges.insert(e);
    for (std::size_t e : g.in_edges(v)) edges.insert(e);
  }
  d.edges.assign(edges.begin(), edges.end());

  std::size_t leaves = 0;
  for (std::size_t e : d.edges) leaves += (on[g.tail(e)] ? 1 : 0) + (on[g.head(e)] ? 1 : 0);
  d.vertex_count = d.vertices.size() + 1 + leaves;
  d.edge_count = d.edges.size() + 1;
  d.is_tree = d.vertex_count == d.edge_count + 1;
  return d;
}

FiltrationLevels filtration_levels(const Graph& g, const TimePath& sigma, std::size_t edge) {
  if (edge >= g.edge_count() || g.dangling(edge)) throw Error("unknown edge");
  const double mid = 0.5 * (g.time(g.tail(edge)) + g.time(g.head(edge)));
  SupportDecomposition d = support_check(g, sigma, {edge, mid});
  if (!d.is_tree)
    throw NotSupported("sigma is not a support: the component has " + std::to_string(d.vertex_count) +
                       " vertices and " + std::to_string(d.edge_count) + " edges");

  const std::vector<bool> on = vertex_mask(g, sigma);
  std::vector<bool> edge_alive(g.edge_count(), true);
  for (std::size_t e = 0; e < g.edge_count(); ++e)
    if (g.dangling(e)) edge_alive[e] = false;
  edge_alive[edge] = false;

  FiltrationLevels L;
  L.sigma = sigma;
  L.edge = edge;
  std::vector<std::size_t> w{g.tail(edge), g.head(edge)};
  auto alive_edges = [&] {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < g.edge_count(); ++e)
      if (edge_alive[e]) out.push_back(e);
    return out;
  };

  for (std::size_t guard = 0;; ++guard) {
    if (guard > g.vertex_count() + 1) throw NotSupported("filtration does not terminate");
    std::sort(w.begin(), w.end());
    L.w.push_back(w);
    L.g_edges.push_back(alive_edges());
    if (std::all_of(w.begin(), w.end(), [&](std::size_t v) { return on[v]; })) break;

    std::map<std::size_t, std::vector<std::size_t>> desc;
    std::set<std::size_t> next;
    for (std::size_t v : w) {
      if (on[v]) {
        desc[v] = {v};
        next.insert(v);
        continue;
      }
      std::vector<std::size_t> incident;
      for (std::size_t e : g.out_edges(v))
        if (edge_alive[e]) incident.push_back(e);
      for (std::size_t e : g.in_edges(v))
        if (edge_alive[e]) incident.push_back(e);
      if (incident.size() != 2)
        throw NotSupported("vertex " + std::to_string(g.id(v)) + " has " + std::to_string(incident.size()) +
                           " edges left at level " + std::to_string(L.w.size()));
      std::set<std::size_t> nb;
      for (std::size_t e : incident) nb.insert(other_end(g, e, v));
      desc[v].assign(nb.begin(), nb.end());
      next.insert(nb.begin(), nb.end());
    }
    for (std::size_t v : w) {
      if (next.count(v)) continue;
      for (std::size_t e : g.out_edges(v)) edge_alive[e] = false;
      for (std::size_t e : g.in_edges(v)) edge_alive[e] = false;
    }
    L.descendants.push_back(std::move(desc));
    w.assign(next.begin(), next.end());
  }
  return L;
}

double AbsorptionDistribution::total() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.probability;
  return s;
}

double AbsorptionDistribution::mean_time() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.probability * a.time;
  return s;
}

double AbsorptionDistribution::probability_of(std::size_t vertex) const {
  for (const Atom& a : atoms)
    if (a.vertex == vertex) return a.probability;
  return 0.0;
}

namespace {

template <class T>
T to_number(double x) {
  return T(x);
}

template <class T>
std::map<std::size_t, T> propagate(const Graph& g, const FiltrationLevels& L, EdgePoint t, std::size_t m) {
  const std::size_t a = g.tail(L.edge), b = g.head(L.edge);
  const T ta = to_number<T>(g.time(a)), tb = to_number<T>(g.time(b)), ts = to_number<T>(t.time);
  std::map<std::size_t, T> dist;
  dist[b] = (ts - ta) / (tb - ta);
  dist[a] = (tb - ts) / (tb - ta);
  for (std::size_t level = 1; level < m; ++level) {
    const auto& desc = L.descendants[level - 1];
    std::map<std::size_t, T> next;
    for (const auto& [v, p] : dist) {
      const std::vector<std::size_t>& nb = desc.at(v);
      if (nb.size() == 1) {
        next[nb[0]] += p;
        continue;
      }
      std::size_t lo = nb[0], hi = nb[1];
      if (g.time(lo) > g.time(hi)) std::swap(lo, hi);
      const double tv = g.time(v);
      if (!(g.time(lo) < tv && tv < g.time(hi)))
        throw NotSupported("neighbours of vertex " + std::to_string(g.id(v)) + " do not straddle it in time");
      const T tl = to_number<T>(g.time(lo)), th = to_number<T>(g.time(hi)), tm = to_number<T>(tv);
      next[hi] += p * ((tm - tl) / (th - tl));
      next[lo] += p * ((th - tm) / (th - tl));
    }
    dist = std::move(next);
  }
  return dist;
}

}  // namespace

AbsorptionDistribution walk_distribution(const Graph& g, const FiltrationLevels& L, EdgePoint t, std::size_t m,
                                         Arithmetic arithmetic) {
  if (t.edge != L.edge) throw Error("t* is not on the filtration edge");
  if (m < 1 || m > L.depth())
    throw Error("level " + std::to_string(m) + " out of range 1.." + std::to_string(L.depth()));
  double ta = g.time(g.tail(t.edge)), tb = g.time(g.head(t.edge));
  if (!(t.time > ta && t.time < tb)) throw Error("t* is not interior to its edge");

  AbsorptionDistribution out;
  out.level = m;
  if (arithmetic == Arithmetic::exact) {
    for (const auto& [v, p] : propagate<Rational>(g, L, t, m)) {
      if (p == 0) continue;
      out.atoms.push_back({v, g.time(v), p.convert_to<double>(), p.str()});
    }
  } else {
    for (const auto& [v, p] : propagate<double>(g, L, t, m)) {
      if (p == 0.0) continue;
      out.atoms.push_back({v, g.time(v), p, ""});
    }
  }
  return out;
}

AbsorptionDistribution walk_distribution(const Graph& g, const TimePath& sigma, EdgePoint t, std::size_t m,
                                         Arithmetic arithmetic) {
  check_inputs(g, sigma, t);
  return walk_distribution(g, filtration_levels(g, sigma, t.edge), t, m, arithmetic);
}

double conditional_expectation(const AbsorptionDistribution& dist, const std::map<std::size_t, double>& values) {
  double s = 0.0;
  for (const Atom& a : dist.atoms) {
    auto it = values.find(a.vertex);
    if (it == values.end()) throw Error("no value for vertex index " + std::to_string(a.vertex));
    s += a.probability * it->second;
  }
  return s;
}

double conditional_expectation(const AbsorptionDistribution& dist, const std::function<double(std::size_t)>& value) {
  double s = 0.0;
  for (const Atom& a : dist.atoms) s += a.probability * value(a.vertex);
  return s;
}

std::vector<double> coefficients(const AbsorptionDistribution& dist, const std::vector<std::size_t>& conditioners) {
  std::vector<double> w;
  w.reserve(conditioners.size());
  for (std::size_t v : conditioners) w.push_back(dist.probability_of(v));
  return w;
}

std::vector<LevelComparison> compare_with_gaussian(const Graph& g, const TimePath& sigma, EdgePoint t,
                                                   const gauss::Law& law) {
  FiltrationLevels L = filtration_levels(g, sigma, t.edge);
  Tower tower = build_tower(g);
  gauss::SampleGrid grid = gauss::SampleGrid::vertices_only(g).with_times(t.edge, {t.time});
  gauss::GaussianField field = gauss::build_field(g, tower, grid, law);
  auto target = grid.find(t.edge, t.time);
  if (!target) throw Error("t* missing from the grid");
  const std::size_t target_node = grid.node(*target);

  std::vector<LevelComparison> out;
  for (std::size_t m = 1; m <= L.depth(); ++m) {
    AbsorptionDistribution dist = walk_distribution(g, L, t, m);
    std::vector<std::size_t> conds;
    for (std::size_t v : L.w[m - 1])
      if (field.variance_node(grid.vertex_node(v)) > 1e-14) conds.push_back(grid.vertex_node(v));
    LevelComparison c;
    c.level = m;
    c.conditioners = conds.size();
    c.mean_time_error = std::abs(dist.mean_time() - t.time);
    gauss::Conditional cc = gauss::conditional_coeffs(field, target_node, conds);
    for (std::size_t i = 0; i < conds.size(); ++i)
      c.max_abs_diff = std::max(c.max_abs_diff, std::abs(cc.weights[i] - dist.probability_of(conds[i])));
    out.push_back(c);
  }
  return out;
}

std::string weights_csv(const Graph& g, const AbsorptionDistribution& dist) {
  std::ostringstream os;
  os.precision(17);
  os << "vertex,time,probability\n";
  for (const Atom& a : dist.atoms) os << g.id(a.vertex) << ',' << a.time << ',' << a.probability << '\n';
  return os.str();
}

nlohmann::json levels_json(const Graph& g, const FiltrationLevels& L) {
  nlohmann::json j;
  j["edge"] = {g.id(g.tail(L.edge)), g.id(g.head(L.edge)), g.edge(L.edge).slot};
  j["sigma"] = path_ids(g, L.sigma);
  j["levels"] = nlohmann::json::array();
  for (std::size_t m = 0; m < L.depth(); ++m) {
    nlohmann::json lv;
    lv["m"] = m + 1;
    std::vector<VertexId> ids;
    for (std::size_t v : L.w[m]) ids.push_back(g.id(v));
    lv["W"] = ids;
    lv["edges"] = L.g_edges[m].size();
    if (m < L.descendants.size()) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [v, nb] : L.descendants[m]) {
        std::vector<VertexId> nid;
        for (std::size_t u : nb) nid.push_back(g.id(u));
        d[std::to_string(g.id(v))] = nid;
      }
      lv["descendants"] = d;
    }
    j["levels"].push_back(lv);
  }
  return j;
}

}  // namespace tlg::harness
