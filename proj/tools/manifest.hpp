#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tlg::cli {

// What a command needs to be re-run and checked.
struct Manifest {
  std::string command;
  std::vector<std::string> args;  // full argument list, manifest flag removed
  std::map<std::string, std::string> inputs;  // path -> content hash
  std::optional<unsigned long long> seed;
  std::map<std::string, double> tolerances;
  std::optional<double> mesh;
  std::vector<std::string> outputs;  // files written besides stdout
  std::string stdout_text;
  int exit_code = 0;
  std::string version;
};

std::string tool_version();
std::string content_hash(const std::string& path);  // FNV-1a of the file bytes, hex

nlohmann::json manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const nlohmann::json& j);

}  // namespace tlg::cli
