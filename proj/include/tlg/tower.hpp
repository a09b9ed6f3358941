#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tlg/cells.hpp"
#include "tlg/graph.hpp"
#include "tlg/paths.hpp"

namespace tlg {

// One attachment: `path` runs from attach_low to attach_high through new
// vertices only; `witness` is a time path of already represented edges
// between the same two points.
struct ConstructionStep {
  TimePath path;
  TimePath witness;
  std::size_t attach_low() const { return path.front(); }
  std::size_t attach_high() const { return path.back(); }
};

struct Tower {
  TimePath base;
  std::vector<ConstructionStep> steps;
};

class NotNcc : public Error {
 public:
  NotNcc(const std::string& what, std::optional<std::pair<Cell, Cell>> witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::optional<std::pair<Cell, Cell>>& witness() const { return witness_; }

 private:
  std::optional<std::pair<Cell, Cell>> witness_;
};

// Greedy construction: repeatedly take the latest represented vertex with an
// unrepresented outgoing edge and attach a path to its forward-minimal end.
Tower build_tower(const Graph& graph);

struct TowerIssue {
  long step;  // -1 for the base path, steps.size() for the final union check
  std::string message;
};

struct TowerReport {
  std::vector<TowerIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

TowerReport verify_tower(const Graph& graph, const Tower& tower);

// A uniformly shuffled valid tower found by randomized backtracking.
// Throws NotNcc if no tower exists.
Tower random_tower(const Graph& graph, std::mt19937_64& rng);

// Tower from explicit paths; witnesses are searched in the represented graph
// (none found leaves an empty witness, which verify_tower rejects).
Tower tower_from_paths(const Graph& graph, const TimePath& base, const std::vector<TimePath>& paths);

// Edge multiset (as indices) covered by the tower, in order of appearance.
std::vector<std::size_t> tower_edges(const Tower& tower);

nlohmann::json tower_to_json(const Graph& graph, const Tower& tower);
// Vertex-id lists are resolved against the graph; parallel hops take the
// lowest slot not yet used by earlier parts of the tower.
Tower tower_from_json(const Graph& graph, const nlohmann::json& j);

// Stable text form used for hashing and for comparing towers.
std::string tower_key(const Graph& graph, const Tower& tower);
std::uint64_t tower_hash(const Graph& graph, const Tower& tower);

}  // namespace tlg
