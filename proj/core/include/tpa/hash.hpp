#pragma once

#include <cstdint>
#include <string>

namespace tpa {

// FNV-1a over bytes; stable content fingerprints for manifests and reports.
uint64_t fnv1a(const void* data, size_t size, uint64_t seed = 0xcbf29ce484222325ull);
uint64_t fnv1a(const std::string& text, uint64_t seed = 0xcbf29ce484222325ull);
std::string hash_hex(uint64_t h);
uint64_t hash_file(const std::string& path);  // throws on missing file

}  // namespace tpa
