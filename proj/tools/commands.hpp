#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tlg/graph.hpp"

namespace tlg::cli {

enum ExitCode : int {
  kOk = 0,
  kNotNcc = 1,    // also: not a support, replayed run differs
  kInvalid = 2,   // graph fails validation or cannot be embedded
  kParse = 3,     // unreadable or malformed input
  kUsage = 4,     // bad arguments
  kMismatch = 5,  // replay produced different output
};

class UsageError : public Error {
 public:
  using Error::Error;
};

// "v:<id>" or "e:<from>-<to>[:slot]@<time>" with the time strictly inside the edge.
struct PointRef {
  std::optional<std::size_t> vertex;
  std::size_t edge = 0;
  double time = 0.0;
};
PointRef parse_point(const Graph& graph, const std::string& text);

// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlg::cli
