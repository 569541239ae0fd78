#include "poqsim/gt_metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

namespace poqsim {

namespace {

#include "unicode_punct.inc"

bool is_punct(uint32_t cp) {
  auto end = std::end(kPunctRanges);
  auto it = std::upper_bound(std::begin(kPunctRanges), end, cp,
                             [](uint32_t v, const uint32_t (&r)[2]) { return v < r[0]; });
  if (it == std::begin(kPunctRanges)) return false;
  --it;
  return cp >= (*it)[0] && cp <= (*it)[1];
}

// Decodes one UTF-8 sequence at `pos`. On malformed input consumes a
// single byte and reports it as-is so the caller can pass it through.
struct Decoded {
  uint32_t cp;
  std::size_t len;
  bool valid;
};

Decoded decode_utf8(std::string_view s, std::size_t pos) {
  auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
  unsigned char b0 = byte(pos);
  if (b0 < 0x80) return {b0, 1, true};

  std::size_t len = 0;
  uint32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {b0, 1, false};
  }
  if (pos + len > s.size()) return {b0, 1, false};
  for (std::size_t i = 1; i < len; ++i) {
    unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) return {b0, 1, false};
    cp = (cp << 6) | (b & 0x3F);
  }
  static constexpr uint32_t kMinForLen[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
    return {b0, 1, false};
  return {cp, len, true};
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_article(const std::string& token) {
  return token == "a" || token == "an" || token == "the";
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    Decoded d = decode_utf8(text, pos);
    if (d.valid && is_punct(d.cp)) {
      pos += d.len;
      continue;
    }
    if (d.valid && d.cp < 0x80) {
      char c = static_cast<char>(d.cp);
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      cleaned.push_back(c);
    } else {
      cleaned.append(text.substr(pos, d.len));
    }
    pos += d.len;
  }

  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < cleaned.size()) {
    while (i < cleaned.size() && is_ascii_space(cleaned[i])) ++i;
    std::size_t start = i;
    while (i < cleaned.size() && !is_ascii_space(cleaned[i])) ++i;
    if (i > start) {
      std::string token = cleaned.substr(start, i - start);
      if (!is_article(token)) tokens.push_back(std::move(token));
    }
  }
  return tokens;
}

TokenF1Result token_f1(std::string_view prediction, std::string_view reference) {
  std::vector<std::string> pred = normalize_text(prediction);
  std::vector<std::string> ref = normalize_text(reference);
  if (pred.empty() || ref.empty()) return {};

  std::map<std::string, int> ref_counts;
  for (const std::string& t : ref) ++ref_counts[t];
  int overlap = 0;
  for (const std::string& t : pred) {
    auto it = ref_counts.find(t);
    if (it != ref_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return {};

  TokenF1Result r;
  r.precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  r.recall = static_cast<double>(overlap) / static_cast<double>(ref.size());
  r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  r.scaled = 10.0 * r.f1;
  return r;
}

std::vector<GenerationRecord> score_generations(std::vector<GenerationRecord> records) {
  for (GenerationRecord& r : records)
    r.gt_score = token_f1(r.output, r.reference).scaled;
  return records;
}

}  // namespace poqsim
