#pragma once

// Internal helpers for line-oriented JSON record files. Not installed.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "poqsim/errors.hpp"

namespace poqsim::jsonl {

using njson = nlohmann::json;

struct LineCtx {
  const std::string& path;
  std::size_t line;
};

[[noreturn]] inline void fail(const LineCtx& ctx, const std::string& msg) {
  throw LoadError(ctx.path, ctx.line, msg);
}

inline const njson& field(const njson& j, const char* key, const LineCtx& ctx) {
  auto it = j.find(key);
  if (it == j.end()) fail(ctx, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string str_field(const njson& j, const char* key, const LineCtx& ctx) {
  const njson& v = field(j, key, ctx);
  if (!v.is_string()) fail(ctx, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

inline std::string nonempty_str_field(const njson& j, const char* key, const LineCtx& ctx) {
  std::string s = str_field(j, key, ctx);
  if (s.empty()) fail(ctx, std::string("field '") + key + "' must be non-empty");
  return s;
}

inline double num_field(const njson& j, const char* key, const LineCtx& ctx) {
  const njson& v = field(j, key, ctx);
  if (!v.is_number()) fail(ctx, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

inline int int_field(const njson& j, const char* key, const LineCtx& ctx) {
  const njson& v = field(j, key, ctx);
  if (!v.is_number_integer()) fail(ctx, std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline njson parse_line(const std::string& text, const LineCtx& ctx) {
  if (text.find_first_not_of(" \t\r") == std::string::npos) fail(ctx, "blank line");
  njson j = njson::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ctx, "malformed JSON");
  if (!j.is_object()) fail(ctx, "line is not a JSON object");
  return j;
}

// Streams a JSONL file through `parse`, tracking line numbers.
template <typename Record, typename Parse>
std::vector<Record> load_lines(const std::string& path, Parse parse) {
  if (!std::filesystem::exists(path)) throw MissingInputError("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open: " + path);

  std::vector<Record> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    LineCtx ctx{path, line_no};
    out.push_back(parse(parse_line(text, ctx), ctx));
  }
  return out;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write: " + path);
  return out;
}

}  // namespace poqsim::jsonl
