#include "poqsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "jsonl_util.hpp"
#include "poqsim/csv.hpp"

namespace poqsim {

namespace {

constexpr TaskType kTaskTypes[] = {TaskType::qa, TaskType::summarization};

TaskScope scope_of(TaskType t) {
  return t == TaskType::qa ? TaskScope::qa : TaskScope::summarization;
}

std::optional<double> reference_value(const GenerationRecord& r, ReferenceSignal ref) {
  return ref == ReferenceSignal::gt ? r.gt_score : r.judge_score;
}

}  // namespace

std::string to_string(ReferenceSignal r) {
  switch (r) {
    case ReferenceSignal::gt: return "gt";
    case ReferenceSignal::judge: return "judge";
  }
  throw Error("bad ReferenceSignal value");
}

std::string to_string(TaskScope s) {
  switch (s) {
    case TaskScope::qa: return "qa";
    case TaskScope::summarization: return "summarization";
    case TaskScope::averaged: return "averaged";
  }
  throw Error("bad TaskScope value");
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson: series lengths differ");
  if (x.size() < 2) throw ValidationError("pearson: need at least 2 pairs");

  double n = static_cast<double>(x.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean_x += x[i];
    mean_y += y[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mean_x;
    double dy = y[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationResult correlation_report(const std::vector<GenerationRecord>& records,
                                     const std::string& evaluator_key,
                                     ReferenceSignal reference) {
  bool evaluator_seen = false;
  std::vector<double> xs[2], ys[2];
  for (const GenerationRecord& r : records) {
    auto it = r.eval_scores.find(evaluator_key);
    if (it == r.eval_scores.end()) continue;
    evaluator_seen = true;
    std::optional<double> ref = reference_value(r, reference);
    if (!ref) continue;
    int scope = static_cast<int>(r.task_type);
    xs[scope].push_back(it->second.raw);
    ys[scope].push_back(*ref);
  }
  if (!evaluator_seen)
    throw ValidationError("no scores for evaluator '" + evaluator_key + "'");

  CorrelationResult result;
  double r_sum = 0.0;
  int64_t n_sum = 0;
  int scopes_used = 0;
  for (TaskType t : kTaskTypes) {
    int scope = static_cast<int>(t);
    std::string scope_name = to_string(scope_of(t));
    if (xs[scope].size() < 2) {
      result.notes.push_back(scope_name + ": fewer than 2 pairs, omitted");
      continue;
    }
    std::optional<double> r = pearson(xs[scope], ys[scope]);
    if (!r) {
      result.notes.push_back(scope_name + ": constant series, r undefined, omitted");
      continue;
    }
    result.rows.push_back({evaluator_key, reference, scope_of(t), *r,
                           static_cast<int64_t>(xs[scope].size())});
    r_sum += *r;
    n_sum += static_cast<int64_t>(xs[scope].size());
    ++scopes_used;
  }
  if (scopes_used > 0)
    result.rows.push_back({evaluator_key, reference, TaskScope::averaged,
                           r_sum / static_cast<double>(scopes_used), n_sum});
  else
    result.notes.push_back("averaged: no per-task correlations available, omitted");
  return result;
}

std::vector<EfficiencyPoint> efficiency_frontier(const std::vector<GenerationRecord>& records,
                                                 const std::vector<EfficiencyProfile>& profiles) {
  std::map<std::string, const EfficiencyProfile*> by_key;
  for (const EfficiencyProfile& p : profiles) by_key[p.node_key] = &p;

  struct Acc {
    double gt_sum = 0.0;
    int64_t gt_n = 0;
    double judge_sum = 0.0;
    int64_t judge_n = 0;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> acc;
  for (const GenerationRecord& r : records) {
    if (!acc.count(r.model_key)) order.push_back(r.model_key);
    Acc& a = acc[r.model_key];
    if (r.gt_score) {
      a.gt_sum += *r.gt_score;
      ++a.gt_n;
    }
    if (r.judge_score) {
      a.judge_sum += *r.judge_score;
      ++a.judge_n;
    }
  }

  std::vector<EfficiencyPoint> points;
  for (const std::string& model : order) {
    const Acc& a = acc.at(model);
    if (a.gt_n == 0) continue;
    auto it = by_key.find(model);
    if (it == by_key.end())
      throw ValidationError("no efficiency profile for model '" + model + "'");
    EfficiencyPoint p;
    p.model_key = model;
    p.avg_quality_gt = a.gt_sum / static_cast<double>(a.gt_n);
    if (a.judge_n > 0) p.avg_quality_judge = a.judge_sum / static_cast<double>(a.judge_n);
    p.avg_latency_ms = it->second->avg_latency_ms;
    p.quality_per_ms = p.avg_quality_gt / p.avg_latency_ms;
    points.push_back(std::move(p));
  }
  return points;
}

void write_correlation_csv(const std::vector<CorrelationRow>& rows, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  out << "evaluator_key,reference,task_scope,pearson_r,n\n";
  for (const CorrelationRow& r : rows) {
    out << csv_escape(r.evaluator_key) << ',' << to_string(r.reference) << ','
        << to_string(r.task_scope) << ',' << format_double(r.pearson_r) << ',' << r.n << '\n';
  }
}

void write_frontier_csv(const std::vector<EfficiencyPoint>& points, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  out << "model_key,avg_quality_gt,avg_quality_judge,avg_latency_ms,quality_per_ms\n";
  for (const EfficiencyPoint& p : points) {
    out << csv_escape(p.model_key) << ',' << format_double(p.avg_quality_gt) << ','
        << (p.avg_quality_judge ? format_double(*p.avg_quality_judge) : std::string()) << ','
        << format_double(p.avg_latency_ms) << ',' << format_double(p.quality_per_ms) << '\n';
  }
}

}  // namespace poqsim
