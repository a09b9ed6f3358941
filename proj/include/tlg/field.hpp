#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "tlg/graph.hpp"
#include "tlg/grid.hpp"
#include "tlg/law.hpp"
#include "tlg/tower.hpp"

namespace tlg::gauss {

// node = w_left * node[left] + w_right * node[right] + sd * Z, Z fresh N(0,1),
// all for the centred process. Missing parents carry weight 0.
struct PlanOp {
  std::size_t node;
  std::optional<std::size_t> left, right;
  double w_left = 0.0, w_right = 0.0, sd = 0.0;
};

// Order in which the tower realizes the sample points.
struct ConstructionPlan {
  std::vector<PlanOp> ops;
  std::vector<double> mean;  // per canonical node
  std::size_t node_count = 0;
};

ConstructionPlan make_plan(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law);

class GaussianField {
 public:
  GaussianField(Graph graph, SampleGrid grid, Law law, Eigen::MatrixXd coefficients, Eigen::VectorXd mean,
                std::vector<std::size_t> order);

  const Graph& graph() const { return graph_; }
  const SampleGrid& grid() const { return grid_; }
  const Law& law() const { return law_; }
  std::size_t node_count() const { return grid_.node_count(); }

  // centred covariance; second_moment adds the mean product
  double covariance(SamplePoint p, SamplePoint q) const;
  double covariance_nodes(std::size_t a, std::size_t b) const;
  double second_moment_nodes(std::size_t a, std::size_t b) const;
  double variance_node(std::size_t a) const { return covariance_nodes(a, a); }
  double mean_node(std::size_t a) const { return mean_(static_cast<Eigen::Index>(a)); }

  Eigen::MatrixXd covariance_matrix() const;
  Eigen::MatrixXd covariance_matrix(const std::vector<std::size_t>& nodes) const;

  // rows: canonical nodes; columns: basis Gaussians in construction order
  const Eigen::MatrixXd& coefficients() const { return coeff_; }
  // canonical nodes listed in construction order
  const std::vector<std::size_t>& construction_order() const { return order_; }

  // copy with one coefficient shifted; for negative controls
  GaussianField with_perturbed_coefficient(std::size_t node, std::size_t basis, double delta) const;

 private:
  Graph graph_;
  SampleGrid grid_;
  Law law_;
  Eigen::MatrixXd coeff_;
  Eigen::VectorXd mean_;
  std::vector<std::size_t> order_;
};

GaussianField build_field(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law);

double cell_covariance_formula(double tj, double tk, double tm, double tn);

class SingularConditioning : public Error {
 public:
  SingularConditioning(const std::string& what, Eigen::VectorXd null_direction)
      : Error(what), null_(std::move(null_direction)) {}
  const Eigen::VectorXd& null_direction() const { return null_; }

 private:
  Eigen::VectorXd null_;
};

class ZeroVariance : public Error {
 public:
  using Error::Error;
};

struct Conditional {
  std::vector<double> weights;
  double intercept = 0.0;  // mean correction: E = intercept + sum w_i X(c_i)
  double residual_variance = 0.0;
  bool pseudo_inverse = false;
};

struct ConditioningOptions {
  double pivot_tolerance = 1e-12;
  bool allow_pseudo_inverse = false;
};

Conditional conditional_coeffs(const GaussianField& field, std::size_t target,
                               const std::vector<std::size_t>& conditioners, ConditioningOptions options = {});
Conditional conditional_coeffs(const GaussianField& field, SamplePoint target,
                               const std::vector<SamplePoint>& conditioners, ConditioningOptions options = {});

struct InvarianceReport {
  double max_abs_diff = 0.0;
  bool pass = false;
  std::size_t towers = 0;
};

InvarianceReport tower_invariance(const Graph& graph, const std::vector<Tower>& towers, const SampleGrid& grid,
                                  const Law& law, double tol);

struct MarkovCheck {
  bool holds = true;
  double max_deviation = 0.0;
  std::size_t pairs = 0;
};

// Past and future are taken on the refined graph of sample points.
MarkovCheck time_markov_deviation(const GaussianField& field, std::size_t node, double tol);
bool check_time_markov(const GaussianField& field, SamplePoint t, double tol);

// The two cell-formula values of cov(X(t4), X(t5)) on Fig. 2 with times k/7,
// or with vertex 2 at time t2 when given.
std::pair<double, double> fig2_inconsistency(double t2 = 2.0 / 7.0);

std::string covariance_csv(const GaussianField& field);

}  // namespace tlg::gauss
