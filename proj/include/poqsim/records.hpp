#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "poqsim/errors.hpp"

// Canonical data model for every pipeline stage, plus JSONL load/validate/save.
// All types are immutable values after load and safe to share across readers.

namespace poqsim {

enum class Dataset { squad, cnn_dailymail, synthetic };
enum class TaskType { qa, summarization };
enum class NodeType { inference, eval };

std::string to_string(Dataset d);
std::string to_string(TaskType t);
std::string to_string(NodeType n);
Dataset dataset_from_string(const std::string& s);
TaskType task_type_from_string(const std::string& s);
NodeType node_type_from_string(const std::string& s);

// Scores live in [0,10]; the range check tolerates serialization rounding.
inline constexpr double kScoreSlack = 1e-9;
inline bool in_score_range(double v) {
  return v >= -kScoreSlack && v <= 10.0 + kScoreSlack;
}

// One corpus item: input prompt, reference answer, task type.
struct TaskRecord {
  std::string id;
  Dataset dataset{};
  TaskType task_type{};
  std::string input;
  std::string reference;

  bool operator==(const TaskRecord&) const = default;
};

struct EvalScore {
  double raw = 0.0;                // evaluator-native scale, unbounded
  std::optional<double> norm;      // min-max normalized to [0,10]

  bool operator==(const EvalScore&) const = default;
};

// One (model, task) output with whatever quality signals have been attached.
struct GenerationRecord {
  std::string id;
  Dataset dataset{};
  TaskType task_type{};
  std::string model_key;
  std::string prompt;
  std::string reference;
  std::string output;
  std::optional<double> gt_score;                 // token F1, [0,10]
  std::map<std::string, EvalScore> eval_scores;   // evaluator_key -> scores
  std::optional<double> judge_score;              // judged subsample only

  bool operator==(const GenerationRecord&) const = default;
};

// Measured latency/throughput/memory per node; latency feeds the cost model,
// the rest is analysis-only.
struct EfficiencyProfile {
  std::string node_key;
  NodeType node_type{};
  double avg_latency_ms = 0.0;
  double throughput_sps = 0.0;
  double peak_mem_mb = 0.0;
  int batch_size = 1;

  bool operator==(const EfficiencyProfile&) const = default;
};

// Ingest-only judge output line.
struct JudgeResult {
  std::string id;
  std::string model_key;
  double score = 0.0;
  std::string justification;

  bool operator==(const JudgeResult&) const = default;
};

// The inference pool F and the evaluator pool M, in scheduling order.
struct NodePool {
  std::vector<std::string> inference_nodes;
  std::vector<std::string> eval_nodes;
};

// Throws ValidationError unless both lists are non-empty and duplicate-free.
void validate_pool(const NodePool& pool);

using ScoreByIdModel = std::map<std::pair<std::string, std::string>, double>;
using RawByIdModelEvaluator =
    std::map<std::tuple<std::string, std::string, std::string>, double>;

// Loaders validate every line and never return a partial result; any
// malformed line raises LoadError with its line number. Ordering is
// preserved from the file.
std::vector<TaskRecord> load_corpus(const std::string& path);
std::vector<GenerationRecord> load_generations(const std::string& path);
std::vector<EfficiencyProfile> load_efficiency(const std::string& path);
std::vector<JudgeResult> load_judge_results(const std::string& path);

// Attaches scores to their (id, model_key) records. Every key must match an
// existing record; an orphan key raises ValidationError. Records not named
// by `judges` keep judge_score absent. Setting a raw evaluator score clears
// any stale norm for that evaluator.
std::vector<GenerationRecord> merge_scores(std::vector<GenerationRecord> records,
                                           const ScoreByIdModel& gt,
                                           const RawByIdModelEvaluator& evals,
                                           const ScoreByIdModel& judges);

ScoreByIdModel judge_map(const std::vector<JudgeResult>& results);

// One canonical JSON object per line, fixed field order, absent optionals
// omitted. Re-running on equal input produces byte-identical files.
void save_jsonl(const std::vector<TaskRecord>& records, const std::string& path);
void save_jsonl(const std::vector<GenerationRecord>& records, const std::string& path);
void save_jsonl(const std::vector<EfficiencyProfile>& profiles, const std::string& path);

}  // namespace poqsim
