#pragma once

#include <functional>
#include <random>

#include "tlg/graph.hpp"

namespace tlg::gen {

// Every strict TLG on n vertices with times k/(n-1) (up to labelling, not up
// to isomorphism). Returns the number of graphs visited.
std::size_t enumerate_strict(int n, const std::function<void(const Graph&)>& visit);

// Random strict TLG with n vertices (n even, n >= 2) and uniform random
// times, found by rejection over random stub matchings. May or may not be NCC.
Graph random_strict(int n, std::mt19937_64& rng);

// Random NCC graph grown from the unit edge by `steps` random path
// attachments between two fresh points (the second reachable from the first),
// with degree-2 chains collapsed afterwards.
// each new path carrying up to `max_new` fresh vertices.
Graph random_ncc(int steps, int max_new, std::mt19937_64& rng);

}  // namespace tlg::gen
