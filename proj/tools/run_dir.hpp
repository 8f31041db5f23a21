#pragma once

#include <string>
#include <vector>

namespace tpa::cli {

// Every subcommand writes all of its outputs into one directory under the
// run root, named by a hash of the resolved configuration and the input
// file contents. Rerunning the same configuration maps to the same
// directory.
struct RunDir {
  std::string root;
  std::string path;
  std::string hash;
};

std::string default_run_root();  // --run-root flag, else $TPA_RUN_ROOT, else ./runs

RunDir make_run_dir(const std::string& root, const std::string& command,
                    const std::string& config_json, const std::vector<std::string>& input_paths);

// manifest.json: resolved config, seed, input hashes, output names, timestamp.
void write_manifest(const RunDir& dir, const std::string& command, const std::string& config_json,
                    uint64_t seed, const std::vector<std::string>& input_paths,
                    const std::vector<std::string>& outputs);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace tpa::cli
