#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tlg/field.hpp"
#include "tlg/rng.hpp"

namespace tlg::sampling {

using gauss::Law;
using gauss::SampleGrid;
using gauss::SamplePoint;

// Brownian bridge from (t0, x0) to (t1, x1) at the given interior times,
// drawn by sequential conditioning. Returns x0, the interior values, x1.
std::vector<double> sample_bridge(double t0, double x0, double t1, double x1, const std::vector<double>& times,
                                  CounterRng& rng);

struct SamplePath {
  std::vector<double> values;  // per canonical grid node
  RngSpec spec;
  std::string law;
  std::uint64_t tower = 0;
};

// Reusable sampler: the construction plan is computed once.
class NaturalSampler {
 public:
  NaturalSampler(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law);

  void sample_into(CounterRng& rng, std::vector<double>& values) const;
  SamplePath sample(RngSpec spec) const;

  std::size_t node_count() const { return plan_.node_count; }
  const SampleGrid& grid() const { return grid_; }
  const gauss::ConstructionPlan& plan() const { return plan_; }

 private:
  Graph graph_;
  SampleGrid grid_;
  Law law_;
  gauss::ConstructionPlan plan_;
  std::uint64_t tower_hash_;
};

SamplePath sample_natural(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law,
                          RngSpec spec);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::size_t batches = 0;
};

constexpr std::size_t kBatches = 20;

// Sample i uses stream i of the seed.
McEstimate mc_covariance(const NaturalSampler& sampler, std::size_t p, std::size_t q, std::size_t n,
                         std::uint64_t seed);
McEstimate mc_covariance(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law,
                         SamplePoint p, SamplePoint q, std::size_t n, std::uint64_t seed);
// Builds the tower first; NotNcc propagates.
McEstimate mc_covariance(const Graph& graph, const SampleGrid& grid, const Law& law, SamplePoint p, SamplePoint q,
                         std::size_t n, std::uint64_t seed);

struct McMatrix {
  Eigen::MatrixXd estimate, std_error;
};
McMatrix mc_covariance_matrix(const NaturalSampler& sampler, const std::vector<std::size_t>& nodes, std::size_t n,
                              std::uint64_t seed);

// Kolmogorov-Smirnov distance of the sample to the standard normal law.
double ks_statistic_normal(std::vector<double> sample);
// Asymptotic critical value at the given level.
double ks_critical(std::size_t n, double alpha);

std::string path_csv(const Graph& graph, const SampleGrid& grid, const SamplePath& path);

}  // namespace tlg::sampling
