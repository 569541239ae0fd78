#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace poqsim {

uint64_t fnv1a64(std::string_view data);

// 16 lowercase hex digits.
std::string hex64(uint64_t v);

struct FileDigest {
  std::string path;
  std::string digest;
  uint64_t bytes = 0;
};

// FNV-1a over the file's bytes. Missing file is a MissingInputError.
FileDigest digest_file(const std::string& path);

// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  uint64_t seed = 0;
  std::map<std::string, std::string> config;
  std::vector<FileDigest> inputs;
  std::vector<FileDigest> outputs;
  // ISO-8601 UTC; filled with the current time when left empty.
  std::string created_utc;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

std::string current_utc_timestamp();

}  // namespace poqsim
