#include "poqsim/normalize.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "jsonl_util.hpp"

namespace poqsim {

namespace {

using jsonl::LineCtx;
using jsonl::fail;
using jsonl::nonempty_str_field;
using jsonl::num_field;
using jsonl::str_field;
using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr TaskType kTaskTypes[] = {TaskType::qa, TaskType::summarization};

}  // namespace

std::vector<NormalizationSpan> fit_spans(const std::vector<GenerationRecord>& records,
                                         const std::string& evaluator_key) {
  struct Acc {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    bool seen = false;
  };
  Acc acc[2];

  for (const GenerationRecord& r : records) {
    auto it = r.eval_scores.find(evaluator_key);
    if (it == r.eval_scores.end()) continue;
    Acc& a = acc[static_cast<int>(r.task_type)];
    a.min = std::min(a.min, it->second.raw);
    a.max = std::max(a.max, it->second.raw);
    a.seen = true;
  }

  std::vector<NormalizationSpan> spans;
  for (TaskType t : kTaskTypes) {
    const Acc& a = acc[static_cast<int>(t)];
    if (a.seen) spans.push_back({evaluator_key, t, a.min, a.max});
  }
  if (spans.empty())
    throw ValidationError("no raw scores for evaluator '" + evaluator_key + "'");
  return spans;
}

double apply_span(double raw, const NormalizationSpan& span) {
  if (!(span.max_raw > span.min_raw)) return 5.0;
  double t = (raw - span.min_raw) / (span.max_raw - span.min_raw);
  return 10.0 * std::clamp(t, 0.0, 1.0);
}

std::vector<NodeCost> latency_costs(const std::vector<EfficiencyProfile>& profiles,
                                    NodeType node_type) {
  std::vector<const EfficiencyProfile*> pool;
  for (const EfficiencyProfile& p : profiles)
    if (p.node_type == node_type) pool.push_back(&p);
  if (pool.empty())
    throw ValidationError("no profiles of node_type '" + to_string(node_type) + "'");

  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  for (const EfficiencyProfile* p : pool) {
    if (p->avg_latency_ms <= 0.0)
      throw ValidationError("avg_latency_ms must be > 0 for '" + p->node_key + "'");
    min = std::min(min, p->avg_latency_ms);
    max = std::max(max, p->avg_latency_ms);
  }

  std::vector<NodeCost> costs;
  costs.reserve(pool.size());
  for (const EfficiencyProfile* p : pool) {
    double norm = max > min ? (p->avg_latency_ms - min) / (max - min) : 0.0;
    costs.push_back({p->node_key, node_type, norm, p->avg_latency_ms});
  }
  return costs;
}

NormalizeResult normalize_records(std::vector<GenerationRecord> records) {
  std::set<std::string> evaluators;
  for (const GenerationRecord& r : records)
    for (const auto& [key, score] : r.eval_scores) evaluators.insert(key);

  NormalizeResult result;
  std::map<std::pair<std::string, TaskType>, NormalizationSpan> lookup;
  for (const std::string& key : evaluators) {
    for (NormalizationSpan& span : fit_spans(records, key)) {
      lookup[{key, span.task_type}] = span;
      result.spans.push_back(std::move(span));
    }
  }

  for (GenerationRecord& r : records)
    for (auto& [key, score] : r.eval_scores)
      score.norm = apply_span(score.raw, lookup.at({key, r.task_type}));

  result.records = std::move(records);
  return result;
}

void save_spans(const std::vector<NormalizationSpan>& spans, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  for (const NormalizationSpan& s : spans) {
    ojson j;
    j["evaluator_key"] = s.evaluator_key;
    j["task_type"] = to_string(s.task_type);
    j["min_raw"] = s.min_raw;
    j["max_raw"] = s.max_raw;
    out << j.dump() << '\n';
  }
}

std::vector<NormalizationSpan> load_spans(const std::string& path) {
  std::set<std::pair<std::string, TaskType>> keys;
  return jsonl::load_lines<NormalizationSpan>(path, [&](const njson& j, const LineCtx& ctx) {
    NormalizationSpan s;
    s.evaluator_key = nonempty_str_field(j, "evaluator_key", ctx);
    std::string tt = str_field(j, "task_type", ctx);
    try {
      s.task_type = task_type_from_string(tt);
    } catch (const ValidationError& e) {
      fail(ctx, e.what());
    }
    if (!keys.insert({s.evaluator_key, s.task_type}).second)
      fail(ctx, "duplicate span for ('" + s.evaluator_key + "', '" + tt + "')");
    s.min_raw = num_field(j, "min_raw", ctx);
    s.max_raw = num_field(j, "max_raw", ctx);
    if (s.max_raw < s.min_raw) fail(ctx, "max_raw < min_raw");
    return s;
  });
}

void save_costs(const std::vector<NodeCost>& costs, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  for (const NodeCost& c : costs) {
    ojson j;
    j["node_key"] = c.node_key;
    j["node_type"] = to_string(c.node_type);
    j["cost_norm"] = c.cost_norm;
    j["avg_latency_ms"] = c.avg_latency_ms;
    out << j.dump() << '\n';
  }
}

std::vector<NodeCost> load_costs(const std::string& path) {
  std::set<std::string> keys;
  return jsonl::load_lines<NodeCost>(path, [&](const njson& j, const LineCtx& ctx) {
    NodeCost c;
    c.node_key = nonempty_str_field(j, "node_key", ctx);
    if (!keys.insert(c.node_key).second) fail(ctx, "duplicate node_key '" + c.node_key + "'");
    std::string nt = str_field(j, "node_type", ctx);
    try {
      c.node_type = node_type_from_string(nt);
    } catch (const ValidationError& e) {
      fail(ctx, e.what());
    }
    c.cost_norm = num_field(j, "cost_norm", ctx);
    if (c.cost_norm < 0.0 || c.cost_norm > 1.0) fail(ctx, "cost_norm out of [0,1]");
    c.avg_latency_ms = num_field(j, "avg_latency_ms", ctx);
    if (c.avg_latency_ms <= 0.0) fail(ctx, "avg_latency_ms must be > 0");
    return c;
  });
}

}  // namespace poqsim
