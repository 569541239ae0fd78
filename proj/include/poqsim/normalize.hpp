#pragma once

#include <string>
#include <vector>

#include "poqsim/records.hpp"

namespace poqsim {

// Min-max range of an evaluator's raw scores within one task type.
struct NormalizationSpan {
  std::string evaluator_key;
  TaskType task_type{};
  double min_raw = 0.0;
  double max_raw = 0.0;

  bool operator==(const NormalizationSpan&) const = default;
};

// Normalized latency cost of a node within its node_type pool.
// avg_latency_ms is carried along so downstream reports don't need to
// re-join against the efficiency profiles.
struct NodeCost {
  std::string node_key;
  NodeType node_type{};
  double cost_norm = 0.0;
  double avg_latency_ms = 0.0;

  bool operator==(const NodeCost&) const = default;
};

// Fits one span per task type over the records that carry a raw score
// for `evaluator_key`. Task types with no such records are omitted;
// no records at all for the evaluator is a ValidationError.
std::vector<NormalizationSpan> fit_spans(const std::vector<GenerationRecord>& records,
                                         const std::string& evaluator_key);

// Maps raw onto [0,10]. A degenerate span (min == max) yields 5.0;
// values outside the span clamp to the boundary.
double apply_span(double raw, const NormalizationSpan& span);

// Min-max normalizes avg_latency_ms over the profiles of `node_type`.
// The fastest node gets 0, the slowest 1; a pool where every latency
// is equal (including a single node) gets 0 throughout. An empty pool
// is a ValidationError.
std::vector<NodeCost> latency_costs(const std::vector<EfficiencyProfile>& profiles,
                                    NodeType node_type);

struct NormalizeResult {
  std::vector<GenerationRecord> records;
  std::vector<NormalizationSpan> spans;
};

// Fits spans for every evaluator present in `records` and fills in
// eval_scores[...].norm on each record accordingly.
NormalizeResult normalize_records(std::vector<GenerationRecord> records);

void save_spans(const std::vector<NormalizationSpan>& spans, const std::string& path);
std::vector<NormalizationSpan> load_spans(const std::string& path);

void save_costs(const std::vector<NodeCost>& costs, const std::string& path);
std::vector<NodeCost> load_costs(const std::string& path);

}  // namespace poqsim
