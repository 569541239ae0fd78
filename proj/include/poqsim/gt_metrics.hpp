#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "poqsim/records.hpp"

namespace poqsim {

// Bag-of-tokens F1 between a generated answer and its reference.
// `scaled` is f1 mapped onto the 0..10 score scale.
struct TokenF1Result {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double scaled = 0.0;
};

// Lowercases ASCII letters, strips Unicode punctuation, drops the
// article tokens "a", "an", "the", and splits on whitespace.
// Invalid UTF-8 bytes pass through untouched.
std::vector<std::string> normalize_text(std::string_view text);

// F1 over normalized token bags. Either side normalizing to an empty
// bag yields all-zero results (including both sides empty).
TokenF1Result token_f1(std::string_view prediction, std::string_view reference);

// Fills gt_score on every record from token_f1(output, reference).
// Existing gt_score values are overwritten.
std::vector<GenerationRecord> score_generations(std::vector<GenerationRecord> records);

}  // namespace poqsim
