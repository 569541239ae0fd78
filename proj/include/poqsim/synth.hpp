#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poqsim/records.hpp"

namespace poqsim {

struct ModelProfile {
  std::string model_key;
  double quality_mean = 5.0;
  double quality_sd = 1.0;
  double latency_ms = 1000.0;
};

// fidelity scales how strongly the evaluator's raw score tracks the
// true quality: 1 follows it, 0 ignores it, negative values invert
// it. noise_sd adds gaussian noise on top, so the measured correlation
// depends on both together.
struct EvaluatorProfile {
  std::string evaluator_key;
  double fidelity = 1.0;
  double noise_sd = 0.0;
  double latency_ms = 1.0;
};

struct SynthSpec {
  uint64_t seed = 42;
  int n_per_task = 200;
  std::vector<ModelProfile> models;
  std::vector<EvaluatorProfile> evaluators;
};

// Keys must be non-empty and unique across both pools; quality_mean in
// [0,10], fidelity in [-1,1], sds >= 0, latencies > 0, n_per_task >= 1.
void validate_spec(const SynthSpec& spec);

struct SynthOutput {
  std::vector<TaskRecord> tasks;
  std::vector<GenerationRecord> records;
  std::vector<EfficiencyProfile> profiles;
};

// Deterministic synthetic corpus: n_per_task tasks per task type, one
// generation record per (task, model). Each record's output is built
// so the token-level score recomputes to exactly the stored gt_score,
// and each evaluator's raw score is fidelity * true_quality plus
// gaussian noise. Same spec, same bytes.
SynthOutput generate(const SynthSpec& spec);

// Writes tasks.jsonl, metrics.jsonl and efficiency.jsonl to out_dir.
void generate_files(const SynthSpec& spec, const std::string& out_dir);

// Five models and three evaluators spanning the quality/latency range,
// with one faithful, one uninformative and one adversarial evaluator.
SynthSpec default_spec();

SynthSpec load_spec(const std::string& path);
void save_spec(const SynthSpec& spec, const std::string& path);

}  // namespace poqsim
