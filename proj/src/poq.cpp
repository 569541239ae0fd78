#include "poqsim/poq.hpp"

#include <cmath>

#include "poqsim/records.hpp"

namespace poqsim {

void validate_params(const RewardParams& params) {
  if (params.alpha_f <= 0.0) throw ValidationError("alpha_f must be > 0");
  if (params.beta_f <= 0.0) throw ValidationError("beta_f must be > 0");
  if (params.alpha_m <= 0.0) throw ValidationError("alpha_m must be > 0");
  if (params.beta_m <= 0.0) throw ValidationError("beta_m must be > 0");
  if (params.k < 1 || params.k > 3) throw ValidationError("k must be in [1,3]");
}

double consensus_quality(std::span<const double> scores) {
  if (scores.empty()) throw ValidationError("consensus over empty committee");
  double sum = 0.0;
  for (double s : scores) {
    if (!in_score_range(s))
      throw ValidationError("committee score out of [0,10]: " + std::to_string(s));
    sum += s;
  }
  return sum / (10.0 * static_cast<double>(scores.size()));
}

double inference_reward(double quality, double cost, const RewardParams& params) {
  return params.alpha_f * quality - params.beta_f * cost;
}

std::vector<EvaluatorOutcome> evaluator_outcomes(std::span<const ScoredEvaluator> scores,
                                                 const std::map<std::string, double>& costs,
                                                 const RewardParams& params) {
  if (scores.empty()) throw ValidationError("empty evaluator committee");

  double mean = 0.0;
  for (const auto& [key, score] : scores) {
    if (!in_score_range(score))
      throw ValidationError("committee score out of [0,10]: " + std::to_string(score));
    mean += score;
  }
  mean /= static_cast<double>(scores.size());

  std::vector<EvaluatorOutcome> out;
  out.reserve(scores.size());
  for (const auto& [key, score] : scores) {
    auto cost_it = costs.find(key);
    if (cost_it == costs.end())
      throw ValidationError("no cost entry for evaluator '" + key + "'");
    EvaluatorOutcome o;
    o.evaluator_key = key;
    o.norm_score = score;
    o.deviation = std::abs(score - mean) / 10.0;
    o.closeness = 1.0 - o.deviation;
    o.reward = params.alpha_m * o.closeness - params.beta_m * cost_it->second;
    out.push_back(std::move(o));
  }
  return out;
}

RoundOutcome run_round(const std::string& record_id, const std::string& model_key,
                       std::span<const ScoredEvaluator> scores, double model_cost,
                       const std::map<std::string, double>& evaluator_costs,
                       const RewardParams& params) {
  RoundOutcome round;
  round.record_id = record_id;
  round.model_key = model_key;

  std::vector<double> values;
  values.reserve(scores.size());
  for (const auto& [key, score] : scores) {
    round.evaluator_subset.push_back(key);
    values.push_back(score);
  }

  round.consensus_q = consensus_quality(values);
  round.inference_reward = inference_reward(round.consensus_q, model_cost, params);
  round.per_evaluator = evaluator_outcomes(scores, evaluator_costs, params);
  return round;
}

}  // namespace poqsim
