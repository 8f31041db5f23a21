#include "run_dir.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "tpa/hash.hpp"

namespace tpa::cli {

std::string default_run_root() {
  const char* env = std::getenv("TPA_RUN_ROOT");
  return env != nullptr && *env != '\0' ? env : "runs";
}

RunDir make_run_dir(const std::string& root, const std::string& command,
                    const std::string& config_json, const std::vector<std::string>& input_paths) {
  uint64_t h = fnv1a(command);
  h = fnv1a(config_json, h);
  for (const std::string& p : input_paths) {
    h = fnv1a(p, h);
    h = fnv1a(reinterpret_cast<const char*>("\x1f"), 1, h);
    uint64_t fh = hash_file(p);
    h = fnv1a(&fh, sizeof fh, h);
  }
  RunDir dir;
  dir.root = root;
  dir.hash = hash_hex(h);
  dir.path = root + "/run-" + dir.hash;
  std::filesystem::create_directories(dir.path);
  return dir;
}

void write_manifest(const RunDir& dir, const std::string& command, const std::string& config_json,
                    uint64_t seed, const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["command"] = command;
  j["config"] = nlohmann::json::parse(config_json);
  j["seed"] = seed;
  nlohmann::json inputs = nlohmann::json::object();
  for (const std::string& p : input_paths) inputs[p] = hash_hex(hash_file(p));
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["run_hash"] = dir.hash;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  j["created_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
  write_text_file(dir.path + "/manifest.json", j.dump(2) + "\n");
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace tpa::cli
