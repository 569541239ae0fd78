#include "poqsim/manifest.hpp"

#include <ctime>

#include "jsonl_util.hpp"

namespace poqsim {

namespace {

using ojson = nlohmann::ordered_json;

constexpr uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr uint64_t kFnvPrime = 0x100000001B3ULL;

}  // namespace

uint64_t fnv1a64(std::string_view data) {
  uint64_t h = kFnvOffset;
  for (unsigned char c : data) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

FileDigest digest_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw MissingInputError("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open: " + path);

  uint64_t h = kFnvOffset;
  uint64_t bytes = 0;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    std::streamsize n = in.gcount();
    bytes += static_cast<uint64_t>(n);
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= kFnvPrime;
    }
  }
  return {path, hex64(h), bytes};
}

std::string current_utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  ojson j;
  j["command"] = manifest.command;
  j["tool_version"] = manifest.tool_version;
  j["seed"] = manifest.seed;
  j["created_utc"] =
      manifest.created_utc.empty() ? current_utc_timestamp() : manifest.created_utc;
  ojson config;
  for (const auto& [key, value] : manifest.config) config[key] = value;
  j["config"] = std::move(config);

  auto files = [](const std::vector<FileDigest>& v) {
    ojson arr = ojson::array();
    for (const FileDigest& f : v) {
      ojson o;
      o["path"] = f.path;
      o["digest"] = f.digest;
      o["bytes"] = f.bytes;
      arr.push_back(std::move(o));
    }
    return arr;
  };
  j["inputs"] = files(manifest.inputs);
  j["outputs"] = files(manifest.outputs);

  std::ofstream out = jsonl::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace poqsim
