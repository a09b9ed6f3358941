#pragma once

#include <optional>
#include <utility>

#include "tlg/graph.hpp"
#include "tlg/paths.hpp"

namespace tlg {

// Two time paths from s to t with disjoint interiors (Menger with unit vertex
// capacities), or nothing if the flow value is below 2. Parallel edges count
// as separate routes. The pair is ordered by the first edge index.
std::optional<std::pair<TimePath, TimePath>> two_disjoint_paths(const Graph& graph, std::size_t s, std::size_t t);

}  // namespace tlg
