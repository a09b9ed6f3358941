#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tlg/graph.hpp"
#include "tlg/harness.hpp"
#include "tlg/measure.hpp"
#include "tlg/paths.hpp"

namespace tlg::dubins {

// Restrictions to [0, mean) and [mean, 1], renormalized. A point mass comes
// back twice.
std::pair<Measure, Measure> split(const Measure& mu);

struct DubinsNode {
  double mean = 0.0;
  double mass = 0.0;  // mu-mass of the node's restriction
  Measure measure;    // normalized
  std::size_t level = 0;
  long parent = -1;
  long left = -1, right = -1;  // a degenerate node is its own child
  bool degenerate = false;
};

struct DubinsTree {
  std::vector<DubinsNode> nodes;               // node 0 is the root
  std::vector<std::vector<std::size_t>> levels;  // distinct nodes present at each level
  std::size_t depth() const { return levels.size() - 1; }
  // H_n: sorted distinct means at level n
  std::vector<double> h(std::size_t n) const;
};

DubinsTree dubins_tree(const Measure& mu, std::size_t depth);

// Law of beta(tau_n) from one-step ruin probabilities down the tree.
Measure embedded_measure(const DubinsTree& tree, std::size_t n);

struct Embedding {
  Graph graph;
  TimePath sigma;
  harness::EdgePoint t_star;
  std::vector<long> node_vertex;  // tree node -> vertex index, -1 when absent
};

// Tree levels 1..n as vertices (root removed, its children joined by the t*
// edge), leaves joined by sigma from time 0 to time 1.
Embedding build_embedding_tlg(const DubinsTree& tree, std::size_t n);
inline Embedding build_embedding_tlg(const DubinsTree& tree) { return build_embedding_tlg(tree, tree.depth()); }

struct SecondMoment {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;
  double lhs_weights = 0.0;  // sum of w_i min(t_i, u)
  std::string method;        // "engine" or "weights"
  std::string note;          // why the engine route was skipped
};

// E(X(t*) X(u)) against int_0^u s dmu + u mu((u, 1]) for the Wiener law.
// u may be any time in [0, 1]; it is added to sigma as a sample point.
SecondMoment verify_second_moment(const Measure& mu, std::size_t depth, double u);

nlohmann::json tree_to_json(const DubinsTree& tree);

}  // namespace tlg::dubins
