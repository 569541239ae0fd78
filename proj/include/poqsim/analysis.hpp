#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "poqsim/records.hpp"

namespace poqsim {

// Which score an evaluator is correlated against.
enum class ReferenceSignal { gt, judge };

enum class TaskScope { qa, summarization, averaged };

std::string to_string(ReferenceSignal r);
std::string to_string(TaskScope s);

// Sample Pearson correlation. Throws on mismatched lengths or fewer
// than two pairs; returns nullopt when either series is constant.
// Results are clamped to [-1, 1] against rounding drift.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationRow {
  std::string evaluator_key;
  ReferenceSignal reference{};
  TaskScope task_scope{};
  double pearson_r = 0.0;
  int64_t n = 0;
};

struct CorrelationResult {
  std::vector<CorrelationRow> rows;
  // Human-readable reasons for omitted scopes (too few pairs,
  // constant series).
  std::vector<std::string> notes;
};

// Correlates the evaluator's raw scores against the reference signal,
// once per task type plus an averaged row (mean of the per-task r
// values, n summed). Scopes that can't produce a correlation are
// omitted and explained in notes. An evaluator with no scores at all
// is a ValidationError.
CorrelationResult correlation_report(const std::vector<GenerationRecord>& records,
                                     const std::string& evaluator_key,
                                     ReferenceSignal reference);

struct EfficiencyPoint {
  std::string model_key;
  double avg_quality_gt = 0.0;
  std::optional<double> avg_quality_judge;
  double avg_latency_ms = 0.0;
  double quality_per_ms = 0.0;
};

// Mean ground-truth quality per model against its latency profile, in
// first-appearance order. Models with no gt-scored records are
// omitted; a scored model without an efficiency profile is a
// ValidationError.
std::vector<EfficiencyPoint> efficiency_frontier(const std::vector<GenerationRecord>& records,
                                                 const std::vector<EfficiencyProfile>& profiles);

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path);
void write_frontier_csv(const std::vector<EfficiencyPoint>& points, const std::string& path);

}  // namespace poqsim
