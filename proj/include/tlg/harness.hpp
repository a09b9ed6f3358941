#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlg/graph.hpp"
#include "tlg/law.hpp"
#include "tlg/paths.hpp"

namespace tlg::harness {

// A point strictly inside an edge.
struct EdgePoint {
  std::size_t edge = 0;
  double time = 0.0;
};

class NotSupported : public Error {
 public:
  using Error::Error;
};

// Component of (graph minus sigma) around t*. Counting convention: t* is a
// vertex splitting its edge in two, and every edge end sitting on sigma is a
// separate leaf (sigma itself is removed).
struct SupportDecomposition {
  TimePath sigma;
  EdgePoint t_star;
  std::vector<std::size_t> vertices;  // off-sigma graph vertices of the component
  std::vector<std::size_t> edges;     // graph edges of the component, t* edge included once
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  bool is_tree = false;
};

SupportDecomposition support_check(const Graph& graph, const TimePath& sigma, EdgePoint t_star);

struct FiltrationLevels {
  TimePath sigma;
  std::size_t edge = 0;
  // w[m-1] is W_m, sorted by vertex index
  std::vector<std::vector<std::size_t>> w;
  // g_edges[m-1]: edges left in G_m
  std::vector<std::vector<std::size_t>> g_edges;
  // descendants[m-1]: N(t) for t in W_m, for m < K
  std::vector<std::map<std::size_t, std::vector<std::size_t>>> descendants;
  std::size_t depth() const { return w.size(); }
};

FiltrationLevels filtration_levels(const Graph& graph, const TimePath& sigma, std::size_t edge);

struct Atom {
  std::size_t vertex = 0;
  double time = 0.0;
  double probability = 0.0;
  std::string exact;  // "p/q" when computed exactly, empty otherwise
};

struct AbsorptionDistribution {
  std::size_t level = 0;
  std::vector<Atom> atoms;  // sorted by vertex index
  double total() const;
  double mean_time() const;
  double probability_of(std::size_t vertex) const;
};

enum class Arithmetic { exact, floating };

AbsorptionDistribution walk_distribution(const Graph& graph, const FiltrationLevels& levels, EdgePoint t_star,
                                         std::size_t m, Arithmetic arithmetic = Arithmetic::exact);
AbsorptionDistribution walk_distribution(const Graph& graph, const TimePath& sigma, EdgePoint t_star,
                                         std::size_t m, Arithmetic arithmetic = Arithmetic::exact);

// Sum of weight * value; throws if a supporting vertex has no value.
double conditional_expectation(const AbsorptionDistribution& dist, const std::map<std::size_t, double>& values);
double conditional_expectation(const AbsorptionDistribution& dist, const std::function<double(std::size_t)>& value);
// Weight vector aligned with `conditioners`; vertices outside the support get 0.
std::vector<double> coefficients(const AbsorptionDistribution& dist, const std::vector<std::size_t>& conditioners);

// Walk weights against Gaussian conditional coefficients of the natural field,
// level by level. Vertices with zero variance are left out of the solve.
struct LevelComparison {
  std::size_t level = 0;
  double max_abs_diff = 0.0;
  double mean_time_error = 0.0;
  std::size_t conditioners = 0;
};
std::vector<LevelComparison> compare_with_gaussian(const Graph& graph, const TimePath& sigma, EdgePoint t_star,
                                                   const gauss::Law& law);

std::string weights_csv(const Graph& graph, const AbsorptionDistribution& dist);
nlohmann::json levels_json(const Graph& graph, const FiltrationLevels& levels);

}  // namespace tlg::harness
