#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "poqsim/errors.hpp"

namespace poqsim {

// Reward weights. alpha_* scales the quality term, beta_* the cost
// penalty; k is the evaluator committee size per round.
struct RewardParams {
  double alpha_f = 1.0;
  double beta_f = 1.0;
  double alpha_m = 1.0;
  double beta_m = 1.0;
  int k = 3;
};

// All weights must be positive and k in [1,3].
void validate_params(const RewardParams& params);

struct EvaluatorOutcome {
  std::string evaluator_key;
  double norm_score = 0.0;
  double deviation = 0.0;
  double closeness = 0.0;
  double reward = 0.0;
};

struct RoundOutcome {
  std::string record_id;
  std::string model_key;
  std::vector<std::string> evaluator_subset;
  double consensus_q = 0.0;
  double inference_reward = 0.0;
  std::vector<EvaluatorOutcome> per_evaluator;
};

// Mean of the 0..10 scores rescaled to [0,1]. Empty input or a score
// outside [0,10] is a ValidationError.
double consensus_quality(std::span<const double> scores);

// alpha_f * quality - beta_f * cost.
double inference_reward(double quality, double cost, const RewardParams& params);

using ScoredEvaluator = std::pair<std::string, double>;

// Per-evaluator deviation from the committee mean (on the 0..1 scale),
// closeness = 1 - deviation, reward = alpha_m * closeness - beta_m * cost.
// An evaluator without a cost entry is a ValidationError.
std::vector<EvaluatorOutcome> evaluator_outcomes(std::span<const ScoredEvaluator> scores,
                                                 const std::map<std::string, double>& costs,
                                                 const RewardParams& params);

// One full consensus round over an already-chosen committee.
RoundOutcome run_round(const std::string& record_id, const std::string& model_key,
                       std::span<const ScoredEvaluator> scores, double model_cost,
                       const std::map<std::string, double>& evaluator_costs,
                       const RewardParams& params);

}  // namespace poqsim
