#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tlg/graph.hpp"
#include "tlg/paths.hpp"

namespace tlg {

struct CellFlags {
  bool simple = false;
  bool forward_minimal = false;
  bool backward_minimal = false;
  bool operator==(const CellFlags&) const = default;
};

struct Cell {
  TimePath a, b;
  std::size_t start = 0, end = 0;
  CellFlags flags;
};

// Builds a cell from two co-terminal paths; throws if they are not a cell of the graph.
Cell make_cell(const Graph& graph, TimePath a, TimePath b);

std::vector<Cell> find_cells(const Graph& graph, PathLimits limits = {});

// Minimality is decided with disjoint-path flows, independently of find_cells.
CellFlags classify_cell(const Graph& graph, const Cell& cell);

// Ends of the cells starting at `start` with the smallest end time.
std::vector<std::size_t> forward_minimal_ends(const Graph& graph, std::size_t start);
// Starts of the cells ending at `end` with the largest start time.
std::vector<std::size_t> backward_minimal_starts(const Graph& graph, std::size_t end);

// One cell with the given start and end, if any.
std::optional<Cell> cell_between(const Graph& graph, std::size_t start, std::size_t end);

enum class NccMethod { automatic, flow, enumeration };

struct NccVerdict {
  bool ncc = true;
  std::optional<std::pair<Cell, Cell>> witness;
  std::string direction;  // "forward" or "backward" when a witness exists
};

struct NccOptions {
  NccMethod method = NccMethod::automatic;
  std::size_t enumeration_vertex_limit = 16;
  PathLimits limits{};
};

NccVerdict is_ncc(const Graph& graph, NccOptions options = {});

std::string describe_cell(const Graph& graph, const Cell& cell);

}  // namespace tlg
