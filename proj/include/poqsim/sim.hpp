#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "poqsim/normalize.hpp"
#include "poqsim/poq.hpp"
#include "poqsim/records.hpp"

namespace poqsim {

enum class Scheduling { uniform };

// fixed uses params.k every round; uniform_1_to_3 draws the committee
// size uniformly from {1,2,3} per round.
enum class KPolicy { fixed, uniform_1_to_3 };

std::string to_string(Scheduling s);
std::string to_string(KPolicy p);
Scheduling scheduling_from_string(const std::string& s);
KPolicy k_policy_from_string(const std::string& s);

struct SimConfig {
  int64_t rounds = 5000;
  uint64_t seed = 0;
  RewardParams params;
  Scheduling scheduling = Scheduling::uniform;
  KPolicy k_policy = KPolicy::fixed;
};

void validate_config(const SimConfig& config);

struct NodeStats {
  std::string node_key;
  NodeType node_type{};
  double total_reward = 0.0;
  int64_t job_count = 0;
  double avg_reward = 0.0;
  double cost_norm = 0.0;
  double avg_latency_ms = 0.0;
};

struct SimResult {
  // Inference nodes first, then evaluators, each in cost-list order.
  std::vector<NodeStats> stats;
  std::vector<RoundOutcome> trace;
  int64_t executed_rounds = 0;
  int64_t degraded_rounds = 0;
  int64_t skipped_rounds = 0;
};

// Runs `config.rounds` consensus rounds over the corpus. Each round
// draws a task and an inference node uniformly, then a committee
// without replacement from the evaluators that scored that (task,
// model) pair. Rounds with no available evaluator are skipped; rounds
// with fewer than the target committee size count as degraded. Node
// pools come from `costs`; a model or evaluator appearing in `records`
// without a cost entry is a ValidationError, as is a record id missing
// from the corpus. Identical inputs and seed give identical results.
SimResult run_simulation(const SimConfig& config, const std::vector<TaskRecord>& corpus,
                         const std::vector<GenerationRecord>& records,
                         const std::vector<NodeCost>& costs, bool keep_trace = false);

// Axes of a cartesian parameter sweep. An empty axis means "hold at
// the base config's value".
struct SweepGrid {
  std::vector<double> alpha_f;
  std::vector<double> beta_f;
  std::vector<double> alpha_m;
  std::vector<double> beta_m;
  std::vector<int> k;
};

struct SweepPoint {
  SimConfig config;
  std::string label;
  SimResult result;
};

// Runs one simulation per grid point, in parallel. Every point gets
// its own seed derived from the base seed and the point's flat index,
// so results are independent of execution order and thread count.
std::vector<SweepPoint> sweep(const SimConfig& base, const SweepGrid& grid,
                              const std::vector<TaskRecord>& corpus,
                              const std::vector<GenerationRecord>& records,
                              const std::vector<NodeCost>& costs);

void write_stats_csv(const std::vector<NodeStats>& stats, const std::string& path);
void write_trace_jsonl(const std::vector<RoundOutcome>& trace, const std::string& path);

}  // namespace poqsim
