#pragma once

#include <vector>

#include "tlg/graph.hpp"

namespace tlg::fixtures {

// Two vertices at 0 and 1 joined by one edge.
Graph minimal();

// Vertex k at time k/7.
Graph fig1();
Graph fig2();
// Fig. 2 with vertex 2 moved to time 3/7.
Graph fig2_shifted();
// Vertex k at time k/11 unless other times are given.
Graph fig4();
Graph fig4(const std::vector<double>& times);
// Fig. 4 without E36, E23, E34; vertex 3 disappears and the graph is relaxed.
Graph fig4_pruned();

// Fig. 2 minus E34 and E25 (relaxed), and minus E34 only (relaxed).
Graph fig2_without_34_25();
Graph fig2_without_34();

// init(0) -> j(1) => n(2) -> terminal(3): one simple cell made of two parallel
// edges j -> n with slots 0 and 1.
Graph single_cell(double t_init, double tj, double tn, double t_term);
// Same shape with times 0, 1/3, 2/3, 1.
Graph parallel_edge();

// k single cells in series: 0 -> 1 => 2 -> 3 => 4 ... -> terminal.
Graph cell_chain(int k);

// A new earliest vertex feeding the old initial vertex and a new latest vertex
// fed by the old terminal vertex (times min - gap and max + gap).
Graph with_leads(const Graph& graph, double gap = 1.0);

}  // namespace tlg::fixtures
