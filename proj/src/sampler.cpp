#include "tlg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

namespace tlg::sampling {

std::vector<double> sample_bridge(double t0, double x0, double t1, double x1, const std::vector<double>& times,
                                  CounterRng& rng) {
  if (!(t0 < t1)) throw Error("bridge needs t0 < t1");
  double prev_t = t0, prev_x = x0;
  std::vector<double> out{x0};
  for (double r : times) {
    if (!(r > prev_t && r < t1)) throw Error("bridge times must increase strictly inside (t0, t1)");
    double wl = (t1 - r) / (t1 - prev_t), wr = (r - prev_t) / (t1 - prev_t);
    double var = (r - prev_t) * (t1 - r) / (t1 - prev_t);
    double x = wl * prev_x + wr * x1 + std::sqrt(var) * rng.normal();
    out.push_back(x);
    prev_t = r;
    prev_x = x;
  }
  out.push_back(x1);
  return out;
}

NaturalSampler::NaturalSampler(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law)
    : graph_(graph),
      grid_(grid),
      law_(law),
      plan_(gauss::make_plan(graph, tower, grid, law)),
      tower_hash_(tower_hash(graph, tower)) {}

void NaturalSampler::sample_into(CounterRng& rng, std::vector<double>& values) const {
  // centred values first, means added at the end
  values.assign(plan_.node_count, 0.0);
  for (const gauss::PlanOp& op : plan_.ops) {
    double x = op.sd * rng.normal();
    if (op.left) x += op.w_left * values[*op.left];
    if (op.right) x += op.w_right * values[*op.right];
    values[op.node] = x;
  }
  for (std::size_t n = 0; n < values.size(); ++n) values[n] += plan_.mean[n];
}

SamplePath NaturalSampler::sample(RngSpec spec) const {
  CounterRng rng(spec);
  SamplePath p;
  sample_into(rng, p.values);
  p.spec = spec;
  p.law = law_.tag();
  p.tower = tower_hash_;
  return p;
}

SamplePath sample_natural(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law,
                          RngSpec spec) {
  return NaturalSampler(graph, tower, grid, law).sample(spec);
}

McMatrix mc_covariance_matrix(const NaturalSampler& sampler, const std::vector<std::size_t>& nodes, std::size_t n,
                              std::uint64_t seed) {
  if (n < 2 * kBatches) throw Error("Monte Carlo needs at least " + std::to_string(2 * kBatches) + " samples");
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd total_xy = Eigen::MatrixXd::Zero(m, m), batch_xy = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd total_x = Eigen::VectorXd::Zero(m), batch_x = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::MatrixXd> batch_cov;
  std::vector<double> values;
  Eigen::VectorXd x(m);
  std::size_t batch_start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng({seed, i});
    sampler.sample_into(rng, values);
    for (Eigen::Index k = 0; k < m; ++k) x(k) = values[nodes[static_cast<std::size_t>(k)]];
    batch_xy.noalias() += x * x.transpose();
    batch_x += x;
    // batch b covers samples [b*n/B, (b+1)*n/B)
    std::size_t b = batch_cov.size();
    if (i + 1 == (b + 1) * n / kBatches) {
      const double c = static_cast<double>(i + 1 - batch_start);
      Eigen::VectorXd mean = batch_x / c;
      batch_cov.push_back(batch_xy / c - mean * mean.transpose());
      total_xy += batch_xy;
      total_x += batch_x;
      batch_xy.setZero();
      batch_x.setZero();
      batch_start = i + 1;
    }
  }
  McMatrix out;
  Eigen::VectorXd mean = total_x / static_cast<double>(n);
  out.estimate = total_xy / static_cast<double>(n) - mean * mean.transpose();
  Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(m, m), sq = Eigen::MatrixXd::Zero(m, m);
  for (const auto& c : batch_cov) avg += c;
  avg /= static_cast<double>(batch_cov.size());
  for (const auto& c : batch_cov) sq += (c - avg).cwiseAbs2();
  const double B = static_cast<double>(batch_cov.size());
  out.std_error = (sq / (B - 1.0) / B).cwiseSqrt();
  return out;
}

McEstimate mc_covariance(const NaturalSampler& sampler, std::size_t p, std::size_t q, std::size_t n,
                         std::uint64_t seed) {
  McMatrix mm = mc_covariance_matrix(sampler, {p, q}, n, seed);
  return {mm.estimate(0, 1), mm.std_error(0, 1), n, kBatches};
}

McEstimate mc_covariance(const Graph& graph, const Tower& tower, const SampleGrid& grid, const Law& law,
                         SamplePoint p, SamplePoint q, std::size_t n, std::uint64_t seed) {
  NaturalSampler s(graph, tower, grid, law);
  return mc_covariance(s, grid.node(p), grid.node(q), n, seed);
}

McEstimate mc_covariance(const Graph& graph, const SampleGrid& grid, const Law& law, SamplePoint p, SamplePoint q,
                         std::size_t n, std::uint64_t seed) {
  return mc_covariance(graph, build_tower(graph), grid, law, p, q, n, seed);
}

double ks_statistic_normal(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  boost::math::normal_distribution<> nd;
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double F = boost::math::cdf(nd, sample[i]);
    d = std::max({d, F - double(i) / n, double(i + 1) / n - F});
  }
  return d;
}

double ks_critical(std::size_t n, double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(double(n)); }

std::string path_csv(const Graph& graph, const SampleGrid& grid, const SamplePath& path) {
  std::ostringstream os;
  os.precision(17);
  os << "label,time,value\n";
  for (std::size_t n = 0; n < path.values.size(); ++n)
    os << grid.label(graph, n) << "," << grid.node_time(n) << "," << path.values[n] << "\n";
  return os.str();
}

}  // namespace tlg::sampling
