#include "poqsim/records.hpp"

#include <set>

#include "jsonl_util.hpp"

namespace poqsim {

namespace {

using jsonl::LineCtx;
using jsonl::fail;
using jsonl::int_field;
using jsonl::nonempty_str_field;
using jsonl::num_field;
using jsonl::str_field;
using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

double score_field(const njson& j, const char* key, const LineCtx& ctx) {
  double v = num_field(j, key, ctx);
  if (!in_score_range(v))
    fail(ctx, std::string("field '") + key + "' out of [0,10]: " + std::to_string(v));
  return v;
}

Dataset dataset_field(const njson& j, const LineCtx& ctx) {
  std::string s = str_field(j, "dataset", ctx);
  try {
    return dataset_from_string(s);
  } catch (const ValidationError& e) {
    fail(ctx, e.what());
  }
}

TaskType task_type_field(const njson& j, const LineCtx& ctx) {
  std::string s = str_field(j, "task_type", ctx);
  try {
    return task_type_from_string(s);
  } catch (const ValidationError& e) {
    fail(ctx, e.what());
  }
}

ojson to_json(const TaskRecord& r) {
  ojson j;
  j["id"] = r.id;
  j["dataset"] = to_string(r.dataset);
  j["task_type"] = to_string(r.task_type);
  j["input"] = r.input;
  j["reference"] = r.reference;
  return j;
}

ojson to_json(const GenerationRecord& r) {
  ojson j;
  j["id"] = r.id;
  j["dataset"] = to_string(r.dataset);
  j["task_type"] = to_string(r.task_type);
  j["model_key"] = r.model_key;
  j["prompt"] = r.prompt;
  j["reference"] = r.reference;
  j["output"] = r.output;
  if (r.gt_score) j["gt_score"] = *r.gt_score;
  if (!r.eval_scores.empty()) {
    ojson evals;
    for (const auto& [key, score] : r.eval_scores) {
      ojson s;
      s["raw"] = score.raw;
      if (score.norm) s["norm"] = *score.norm;
      evals[key] = std::move(s);
    }
    j["eval_scores"] = std::move(evals);
  }
  if (r.judge_score) j["judge_score"] = *r.judge_score;
  return j;
}

ojson to_json(const EfficiencyProfile& p) {
  ojson j;
  j["node_key"] = p.node_key;
  j["node_type"] = to_string(p.node_type);
  j["avg_latency_ms"] = p.avg_latency_ms;
  j["throughput_sps"] = p.throughput_sps;
  j["peak_mem_mb"] = p.peak_mem_mb;
  j["batch_size"] = p.batch_size;
  return j;
}

template <typename Record>
void save_lines(const std::vector<Record>& records, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  for (const Record& r : records) out << to_json(r).dump() << '\n';
}

void check_no_duplicates(const std::vector<std::string>& keys, const char* what) {
  std::set<std::string> seen;
  for (const std::string& k : keys)
    if (!seen.insert(k).second)
      throw ValidationError(std::string("duplicate ") + what + " '" + k + "'");
}

}  // namespace

std::string to_string(Dataset d) {
  switch (d) {
    case Dataset::squad: return "squad";
    case Dataset::cnn_dailymail: return "cnn_dailymail";
    case Dataset::synthetic: return "synthetic";
  }
  throw Error("bad Dataset value");
}

std::string to_string(TaskType t) {
  switch (t) {
    case TaskType::qa: return "qa";
    case TaskType::summarization: return "summarization";
  }
  throw Error("bad TaskType value");
}

std::string to_string(NodeType n) {
  switch (n) {
    case NodeType::inference: return "inference";
    case NodeType::eval: return "eval";
  }
  throw Error("bad NodeType value");
}

Dataset dataset_from_string(const std::string& s) {
  if (s == "squad") return Dataset::squad;
  if (s == "cnn_dailymail") return Dataset::cnn_dailymail;
  if (s == "synthetic") return Dataset::synthetic;
  throw ValidationError("unknown dataset '" + s + "'");
}

TaskType task_type_from_string(const std::string& s) {
  if (s == "qa") return TaskType::qa;
  if (s == "summarization") return TaskType::summarization;
  throw ValidationError("unknown task_type '" + s + "'");
}

NodeType node_type_from_string(const std::string& s) {
  if (s == "inference") return NodeType::inference;
  if (s == "eval") return NodeType::eval;
  throw ValidationError("unknown node_type '" + s + "'");
}

void validate_pool(const NodePool& pool) {
  if (pool.inference_nodes.empty()) throw ValidationError("inference pool is empty");
  if (pool.eval_nodes.empty()) throw ValidationError("evaluator pool is empty");
  check_no_duplicates(pool.inference_nodes, "inference node");
  check_no_duplicates(pool.eval_nodes, "evaluator node");
}

std::vector<TaskRecord> load_corpus(const std::string& path) {
  std::set<std::string> ids;
  return jsonl::load_lines<TaskRecord>(path, [&](const njson& j, const LineCtx& ctx) {
    TaskRecord r;
    r.id = nonempty_str_field(j, "id", ctx);
    if (!ids.insert(r.id).second) fail(ctx, "duplicate id '" + r.id + "'");
    r.dataset = dataset_field(j, ctx);
    r.task_type = task_type_field(j, ctx);
    r.input = nonempty_str_field(j, "input", ctx);
    r.reference = nonempty_str_field(j, "reference", ctx);
    return r;
  });
}

std::vector<GenerationRecord> load_generations(const std::string& path) {
  std::set<std::pair<std::string, std::string>> keys;
  return jsonl::load_lines<GenerationRecord>(path, [&](const njson& j, const LineCtx& ctx) {
    GenerationRecord r;
    r.id = nonempty_str_field(j, "id", ctx);
    r.dataset = dataset_field(j, ctx);
    r.task_type = task_type_field(j, ctx);
    r.model_key = nonempty_str_field(j, "model_key", ctx);
    if (!keys.insert({r.id, r.model_key}).second)
      fail(ctx, "duplicate (id, model_key) ('" + r.id + "', '" + r.model_key + "')");
    r.prompt = str_field(j, "prompt", ctx);
    r.reference = str_field(j, "reference", ctx);
    r.output = str_field(j, "output", ctx);
    if (j.contains("gt_score")) r.gt_score = score_field(j, "gt_score", ctx);
    if (j.contains("judge_score")) r.judge_score = score_field(j, "judge_score", ctx);
    if (j.contains("eval_scores")) {
      const njson& evals = j.at("eval_scores");
      if (!evals.is_object()) fail(ctx, "field 'eval_scores' must be an object");
      for (auto it = evals.begin(); it != evals.end(); ++it) {
        const njson& s = it.value();
        if (!s.is_object()) fail(ctx, "eval_scores entry '" + it.key() + "' must be an object");
        EvalScore score;
        score.raw = num_field(s, "raw", ctx);
        if (s.contains("norm")) {
          double norm = num_field(s, "norm", ctx);
          if (!in_score_range(norm))
            fail(ctx, "norm for '" + it.key() + "' out of [0,10]: " + std::to_string(norm));
          score.norm = norm;
        }
        r.eval_scores[it.key()] = score;
      }
    }
    return r;
  });
}

std::vector<EfficiencyProfile> load_efficiency(const std::string& path) {
  std::set<std::string> keys;
  return jsonl::load_lines<EfficiencyProfile>(path, [&](const njson& j, const LineCtx& ctx) {
    EfficiencyProfile p;
    p.node_key = nonempty_str_field(j, "node_key", ctx);
    if (!keys.insert(p.node_key).second) fail(ctx, "duplicate node_key '" + p.node_key + "'");
    std::string nt = str_field(j, "node_type", ctx);
    try {
      p.node_type = node_type_from_string(nt);
    } catch (const ValidationError& e) {
      fail(ctx, e.what());
    }
    p.avg_latency_ms = num_field(j, "avg_latency_ms", ctx);
    if (p.avg_latency_ms <= 0.0) fail(ctx, "avg_latency_ms must be > 0");
    p.throughput_sps = num_field(j, "throughput_sps", ctx);
    if (p.throughput_sps <= 0.0) fail(ctx, "throughput_sps must be > 0");
    p.peak_mem_mb = num_field(j, "peak_mem_mb", ctx);
    if (p.peak_mem_mb < 0.0) fail(ctx, "peak_mem_mb must be >= 0");
    p.batch_size = int_field(j, "batch_size", ctx);
    if (p.batch_size < 1) fail(ctx, "batch_size must be >= 1");
    return p;
  });
}

std::vector<JudgeResult> load_judge_results(const std::string& path) {
  return jsonl::load_lines<JudgeResult>(path, [&](const njson& j, const LineCtx& ctx) {
    JudgeResult r;
    r.id = nonempty_str_field(j, "id", ctx);
    r.model_key = nonempty_str_field(j, "model_key", ctx);
    r.score = score_field(j, "score", ctx);
    r.justification = str_field(j, "justification", ctx);
    return r;
  });
}

std::vector<GenerationRecord> merge_scores(std::vector<GenerationRecord> records,
                                           const ScoreByIdModel& gt,
                                           const RawByIdModelEvaluator& evals,
                                           const ScoreByIdModel& judges) {
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i)
    index[{records[i].id, records[i].model_key}] = i;

  auto locate = [&](const std::string& id, const std::string& model) {
    auto it = index.find({id, model});
    if (it == index.end())
      throw ValidationError("orphan score key ('" + id + "', '" + model +
                            "'): no matching record");
    return it->second;
  };

  auto check_range = [](double v, const char* what) {
    if (!in_score_range(v))
      throw ValidationError(std::string(what) + " out of [0,10]: " + std::to_string(v));
  };

  for (const auto& [key, score] : gt) {
    check_range(score, "gt score");
    records[locate(key.first, key.second)].gt_score = score;
  }
  for (const auto& [key, raw] : evals) {
    const auto& [id, model, evaluator] = key;
    records[locate(id, model)].eval_scores[evaluator] = EvalScore{raw, std::nullopt};
  }
  for (const auto& [key, score] : judges) {
    check_range(score, "judge score");
    records[locate(key.first, key.second)].judge_score = score;
  }
  return records;
}

ScoreByIdModel judge_map(const std::vector<JudgeResult>& results) {
  ScoreByIdModel m;
  for (const JudgeResult& r : results) m[{r.id, r.model_key}] = r.score;
  return m;
}

void save_jsonl(const std::vector<TaskRecord>& records, const std::string& path) {
  save_lines(records, path);
}

void save_jsonl(const std::vector<GenerationRecord>& records, const std::string& path) {
  save_lines(records, path);
}

void save_jsonl(const std::vector<EfficiencyProfile>& profiles, const std::string& path) {
  save_lines(profiles, path);
}

}  // namespace poqsim
