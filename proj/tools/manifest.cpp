#include "manifest.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "tlg/graph_io.hpp"

#ifndef TLG_VERSION_HASH
#define TLG_VERSION_HASH "unknown"
#endif

namespace tlg::cli {

std::string tool_version() { return TLG_VERSION_HASH; }

std::string content_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

nlohmann::json manifest_to_json(const Manifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["args"] = m.args;
  j["inputs"] = m.inputs;
  j["seed"] = m.seed ? nlohmann::json(*m.seed) : nlohmann::json(nullptr);
  j["tolerances"] = m.tolerances;
  j["mesh"] = m.mesh ? nlohmann::json(*m.mesh) : nlohmann::json(nullptr);
  j["outputs"] = m.outputs;
  j["stdout"] = m.stdout_text;
  j["exit_code"] = m.exit_code;
  j["version"] = m.version;
  return j;
}

Manifest manifest_from_json(const nlohmann::json& j) {
  try {
    Manifest m;
    m.command = j.at("command").get<std::string>();
    m.args = j.at("args").get<std::vector<std::string>>();
    m.inputs = j.value("inputs", std::map<std::string, std::string>{});
    if (j.contains("seed") && !j.at("seed").is_null()) m.seed = j.at("seed").get<unsigned long long>();
    m.tolerances = j.value("tolerances", std::map<std::string, double>{});
    if (j.contains("mesh") && !j.at("mesh").is_null()) m.mesh = j.at("mesh").get<double>();
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.stdout_text = j.at("stdout").get<std::string>();
    m.exit_code = j.value("exit_code", 0);
    m.version = j.value("version", std::string());
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad manifest: ") + e.what());
  }
}

}  // namespace tlg::cli
