#include "tlg/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/dynamic_bitset.hpp>

namespace tlg::gauss {

namespace {

// interior grid nodes of an edge in time order
std::vector<std::size_t> interior_nodes(const SampleGrid& grid, std::size_t e) {
  std::vector<std::size_t> r;
  for (std::size_t i = 1; i + 1 < grid.times(e).size(); ++i) r.push_back(grid.node({e, i}));
  return r;
}

}  // namespace

ConstructionPlan make_plan(const Graph& g, const Tower& tower, const SampleGrid& grid, const Law& law) {
  if (grid.edge_count() != g.edge_count() || grid.vertex_count() != g.vertex_count())
    throw Error("grid does not belong to this graph");
  TowerReport rep = verify_tower(g, tower);
  if (!rep.ok()) throw Error("tower does not verify: " + rep.summary());
  ResolvedLaw rl(law, g.time(g.initial()));

  ConstructionPlan plan;
  plan.node_count = grid.node_count();
  plan.mean.resize(plan.node_count);
  for (std::size_t n = 0; n < plan.node_count; ++n) plan.mean[n] = rl.mean(grid.node_time(n));

  std::vector<std::size_t> base;
  base.push_back(tower.base.front());
  for (std::size_t e : tower.base.edges) {
    for (std::size_t n : interior_nodes(grid, e)) base.push_back(n);
    base.push_back(g.head(e));
  }
  plan.ops.push_back({base[0], std::nullopt, std::nullopt, 0.0, 0.0, std::sqrt(rl.variance(grid.node_time(base[0])))});
  for (std::size_t i = 1; i < base.size(); ++i) {
    Weights w = rl.transition(grid.node_time(base[i - 1]), grid.node_time(base[i]));
    plan.ops.push_back({base[i], base[i - 1], std::nullopt, w.left, 0.0, std::sqrt(w.variance)});
  }

  for (const ConstructionStep& step : tower.steps) {
    const std::size_t low = step.attach_low(), high = step.attach_high();
    if (!(grid.node_time(low) < grid.node_time(high))) throw Error("zero-length bridge in tower step");
    std::vector<std::size_t> inside;
    for (std::size_t k = 0; k < step.path.edges.size(); ++k) {
      std::size_t e = step.path.edges[k];
      for (std::size_t n : interior_nodes(grid, e)) inside.push_back(n);
      if (k + 1 < step.path.edges.size()) inside.push_back(g.head(e));
    }
    std::size_t prev = low;
    const double th = grid.node_time(high);
    for (std::size_t n : inside) {
      Weights w = rl.bridge(grid.node_time(prev), grid.node_time(n), th);
      plan.ops.push_back({n, prev, high, w.left, w.right, std::sqrt(w.variance)});
      prev = n;
    }
  }
  if (plan.ops.size() != plan.node_count) throw std::logic_error("construction plan misses sample points");
  return plan;
}

GaussianField::GaussianField(Graph graph, SampleGrid grid, Law law, Eigen::MatrixXd coefficients,
                             Eigen::VectorXd mean, std::vector<std::size_t> order)
    : graph_(std::move(graph)),
      grid_(std::move(grid)),
      law_(law),
      coeff_(std::move(coefficients)),
      mean_(std::move(mean)),
      order_(std::move(order)) {}

GaussianField build_field(const Graph& g, const Tower& tower, const SampleGrid& grid, const Law& law) {
  ConstructionPlan plan = make_plan(g, tower, grid, law);
  const auto n = static_cast<Eigen::Index>(plan.node_count);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < plan.ops.size(); ++k) {
    const PlanOp& op = plan.ops[k];
    auto row = static_cast<Eigen::Index>(op.node);
    if (op.left && op.w_left != 0.0) L.row(row) += op.w_left * L.row(static_cast<Eigen::Index>(*op.left));
    if (op.right && op.w_right != 0.0) L.row(row) += op.w_right * L.row(static_cast<Eigen::Index>(*op.right));
    L(row, static_cast<Eigen::Index>(k)) = op.sd;
    order.push_back(op.node);
  }
  Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(plan.mean.data(), n);
  return GaussianField(g, grid, law, std::move(L), std::move(mean), std::move(order));
}

double GaussianField::covariance_nodes(std::size_t a, std::size_t b) const {
  return coeff_.row(static_cast<Eigen::Index>(a)).dot(coeff_.row(static_cast<Eigen::Index>(b)));
}

double GaussianField::second_moment_nodes(std::size_t a, std::size_t b) const {
  return covariance_nodes(a, b) + mean_node(a) * mean_node(b);
}

double GaussianField::covariance(SamplePoint p, SamplePoint q) const {
  return covariance_nodes(grid_.node(p), grid_.node(q));
}

Eigen::MatrixXd GaussianField::covariance_matrix() const { return coeff_ * coeff_.transpose(); }

Eigen::MatrixXd GaussianField::covariance_matrix(const std::vector<std::size_t>& nodes) const {
  Eigen::MatrixXd sub(nodes.size(), coeff_.cols());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    sub.row(static_cast<Eigen::Index>(i)) = coeff_.row(static_cast<Eigen::Index>(nodes[i]));
  return sub * sub.transpose();
}

GaussianField GaussianField::with_perturbed_coefficient(std::size_t node, std::size_t basis, double delta) const {
  Eigen::MatrixXd c = coeff_;
  c(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(basis)) += delta;
  return GaussianField(graph_, grid_, law_, std::move(c), mean_, order_);
}

double cell_covariance_formula(double tj, double tk, double tm, double tn) {
  if (tn == tj) throw Error("cell formula needs tn > tj");
  return tj + (tk - tj) * (tm - tj) / (tn - tj);
}

Conditional conditional_coeffs(const GaussianField& f, std::size_t target, const std::vector<std::size_t>& cs,
                               ConditioningOptions options) {
  Conditional out;
  const std::size_t m = cs.size();
  out.weights.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (cs[i] == target) {
      out.weights[i] = 1.0;
      return out;
    }
  const double var_t = f.variance_node(target);
  if (m == 0) {
    out.intercept = f.mean_node(target);
    out.residual_variance = var_t;
    return out;
  }
  Eigen::MatrixXd C = f.covariance_matrix(cs);
  Eigen::VectorXd c(m);
  for (std::size_t i = 0; i < m; ++i) c(static_cast<Eigen::Index>(i)) = f.covariance_nodes(cs[i], target);

  const double scale = std::max(1.0, C.diagonal().cwiseAbs().maxCoeff());
  Eigen::LDLT<Eigen::MatrixXd> ldlt(C);
  bool singular = ldlt.info() != Eigen::Success || ldlt.vectorD().cwiseAbs().minCoeff() <= options.pivot_tolerance * scale;
  Eigen::VectorXd w;
  if (!singular) {
    w = ldlt.solve(c);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
    if (!options.allow_pseudo_inverse) {
      std::ostringstream os;
      os << "singular conditioning set; null direction over";
      for (std::size_t i = 0; i < m; ++i) os << " " << f.grid().label(f.graph(), cs[i]);
      throw SingularConditioning(os.str(), eig.eigenvectors().col(0));
    }
    const Eigen::VectorXd& ev = eig.eigenvalues();
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (ev(i) > options.pivot_tolerance * scale) inv(i) = 1.0 / ev(i);
    w = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * c;
    out.pseudo_inverse = true;
  }
  out.intercept = f.mean_node(target);
  for (std::size_t i = 0; i < m; ++i) {
    out.weights[i] = w(static_cast<Eigen::Index>(i));
    out.intercept -= out.weights[i] * f.mean_node(cs[i]);
  }
  double resid = var_t - c.dot(w);
  if (resid < 0 && resid > -1e-12 * std::max(1.0, var_t)) resid = 0.0;
  out.residual_variance = resid;
  return out;
}

Conditional conditional_coeffs(const GaussianField& f, SamplePoint target, const std::vector<SamplePoint>& cs,
                               ConditioningOptions options) {
  std::vector<std::size_t> nodes;
  for (const SamplePoint& p : cs) nodes.push_back(f.grid().node(p));
  return conditional_coeffs(f, f.grid().node(target), nodes, options);
}

InvarianceReport tower_invariance(const Graph& g, const std::vector<Tower>& towers, const SampleGrid& grid,
                                  const Law& law, double tol) {
  if (towers.size() < 2) throw Error("tower invariance needs at least two towers");
  InvarianceReport rep;
  rep.towers = towers.size();
  Eigen::MatrixXd first = build_field(g, towers[0], grid, law).covariance_matrix();
  for (std::size_t k = 1; k < towers.size(); ++k) {
    Eigen::MatrixXd other = build_field(g, towers[k], grid, law).covariance_matrix();
    rep.max_abs_diff = std::max(rep.max_abs_diff, (other - first).cwiseAbs().maxCoeff());
  }
  rep.pass = rep.max_abs_diff <= tol;
  return rep;
}

MarkovCheck time_markov_deviation(const GaussianField& f, std::size_t t, double tol) {
  const SampleGrid& grid = f.grid();
  const Graph& g = f.graph();
  const std::size_t n = grid.node_count();
  const double var_t = f.variance_node(t);
  if (!(var_t > 0)) throw ZeroVariance("time-Markov check at a zero-variance point " + grid.label(g, t));

  std::vector<std::vector<std::size_t>> next(n);
  for (std::size_t e = 0; e < grid.edge_count(); ++e)
    for (std::size_t i = 0; i + 1 < grid.times(e).size(); ++i) next[grid.node({e, i})].push_back(grid.node({e, i + 1}));
  std::vector<std::size_t> by_time(n);
  std::iota(by_time.begin(), by_time.end(), 0);
  std::sort(by_time.begin(), by_time.end(), [&](std::size_t a, std::size_t b) { return grid.node_time(a) < grid.node_time(b); });
  std::vector<boost::dynamic_bitset<>> down(n, boost::dynamic_bitset<>(n));
  for (auto it = by_time.rbegin(); it != by_time.rend(); ++it)
    for (std::size_t w : next[*it]) {
      down[*it].set(w);
      down[*it] |= down[w];
    }

  Eigen::MatrixXd K = f.covariance_matrix();
  auto k = [&](std::size_t a, std::size_t b) { return K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)); };
  MarkovCheck out;
  for (std::size_t a = 0; a < n; ++a) {
    if (!down[a].test(t)) continue;
    for (std::size_t b = down[t].find_first(); b != boost::dynamic_bitset<>::npos; b = down[t].find_next(b)) {
      double dev = std::abs(k(a, b) - k(a, t) * k(t, b) / var_t);
      out.max_deviation = std::max(out.max_deviation, dev);
      ++out.pairs;
    }
  }
  out.holds = out.max_deviation <= tol;
  return out;
}

bool check_time_markov(const GaussianField& f, SamplePoint t, double tol) {
  return time_markov_deviation(f, f.grid().node(t), tol).holds;
}

std::pair<double, double> fig2_inconsistency(double t2) {
  const double t3 = 3 / 7.0, t4 = 4 / 7.0, t5 = 5 / 7.0, t6 = 6 / 7.0;
  // cells (3,4,6 | 3,5,6) and (2,5,6 | 2,4,6)
  return {cell_covariance_formula(t3, t4, t5, t6), cell_covariance_formula(t2, t5, t4, t6)};
}

std::string covariance_csv(const GaussianField& f) {
  Eigen::MatrixXd K = f.covariance_matrix();
  std::ostringstream os;
  os.precision(17);
  os << "label";
  for (std::size_t j = 0; j < f.node_count(); ++j) os << "," << f.grid().label(f.graph(), j);
  os << "\n";
  for (std::size_t i = 0; i < f.node_count(); ++i) {
    os << f.grid().label(f.graph(), i);
    for (std::size_t j = 0; j < f.node_count(); ++j)
      os << "," << K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    os << "\n";
  }
  return os.str();
}

}  // namespace tlg::gauss
