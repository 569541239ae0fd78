#include "poqsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "jsonl_util.hpp"
#include "poqsim/gt_metrics.hpp"
#include "poqsim/rng.hpp"

namespace poqsim {

namespace {

using njson = nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr int kTokensPerReference = 10;

std::string task_id(TaskType t, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%04d", t == TaskType::qa ? "qa" : "sum", index);
  return buf;
}

std::string make_reference(const std::string& id) {
  std::string ref;
  for (int i = 0; i < kTokensPerReference; ++i) {
    if (i > 0) ref += ' ';
    ref += id + "ref" + std::to_string(i);
  }
  return ref;
}

// First `hits` reference tokens plus filler that can never match.
std::string make_output(const std::string& id, int hits) {
  std::string out;
  for (int i = 0; i < kTokensPerReference; ++i) {
    if (i > 0) out += ' ';
    if (i < hits) out += id + "ref" + std::to_string(i);
    else out += id + "junk" + std::to_string(i);
  }
  return out;
}

void check_key(const std::string& key, const char* what, std::set<std::string>& seen) {
  if (key.empty()) throw ValidationError(std::string(what) + " key must be non-empty");
  if (!seen.insert(key).second) throw ValidationError("duplicate node key '" + key + "'");
}

}  // namespace

void validate_spec(const SynthSpec& spec) {
  if (spec.n_per_task < 1) throw ValidationError("n_per_task must be >= 1");
  if (spec.models.empty()) throw ValidationError("spec has no models");
  if (spec.evaluators.empty()) throw ValidationError("spec has no evaluators");

  std::set<std::string> keys;
  for (const ModelProfile& m : spec.models) {
    check_key(m.model_key, "model", keys);
    if (m.quality_mean < 0.0 || m.quality_mean > 10.0)
      throw ValidationError("quality_mean out of [0,10] for '" + m.model_key + "'");
    if (m.quality_sd < 0.0)
      throw ValidationError("quality_sd must be >= 0 for '" + m.model_key + "'");
    if (m.latency_ms <= 0.0)
      throw ValidationError("latency_ms must be > 0 for '" + m.model_key + "'");
  }
  for (const EvaluatorProfile& e : spec.evaluators) {
    check_key(e.evaluator_key, "evaluator", keys);
    if (e.fidelity < -1.0 || e.fidelity > 1.0)
      throw ValidationError("fidelity out of [-1,1] for '" + e.evaluator_key + "'");
    if (e.noise_sd < 0.0)
      throw ValidationError("noise_sd must be >= 0 for '" + e.evaluator_key + "'");
    if (e.latency_ms <= 0.0)
      throw ValidationError("latency_ms must be > 0 for '" + e.evaluator_key + "'");
  }
}

SynthOutput generate(const SynthSpec& spec) {
  validate_spec(spec);

  SynthOutput out;
  Rng rng(spec.seed);

  for (TaskType t : {TaskType::qa, TaskType::summarization}) {
    for (int i = 0; i < spec.n_per_task; ++i) {
      std::string id = task_id(t, i);
      TaskRecord task;
      task.id = id;
      task.dataset = Dataset::synthetic;
      task.task_type = t;
      task.input = "synthetic " + to_string(t) + " task " + id;
      task.reference = make_reference(id);
      out.tasks.push_back(task);

      for (const ModelProfile& m : spec.models) {
        double q_true = std::clamp(rng.normal(m.quality_mean, m.quality_sd), 0.0, 10.0);
        int hits = static_cast<int>(std::llround(q_true));

        GenerationRecord r;
        r.id = id;
        r.dataset = Dataset::synthetic;
        r.task_type = t;
        r.model_key = m.model_key;
        r.prompt = task.input;
        r.reference = task.reference;
        r.output = make_output(id, hits);
        r.gt_score = token_f1(r.output, r.reference).scaled;
        for (const EvaluatorProfile& e : spec.evaluators)
          r.eval_scores[e.evaluator_key] =
              EvalScore{e.fidelity * q_true + rng.normal(0.0, e.noise_sd), std::nullopt};
        out.records.push_back(std::move(r));
      }
    }
  }

  for (const ModelProfile& m : spec.models)
    out.profiles.push_back(
        {m.model_key, NodeType::inference, m.latency_ms, 1000.0 / m.latency_ms, 1024.0, 1});
  for (const EvaluatorProfile& e : spec.evaluators)
    out.profiles.push_back(
        {e.evaluator_key, NodeType::eval, e.latency_ms, 1000.0 / e.latency_ms, 256.0, 1});
  return out;
}

void generate_files(const SynthSpec& spec, const std::string& out_dir) {
  SynthOutput out = generate(spec);
  std::filesystem::create_directories(out_dir);
  std::filesystem::path dir(out_dir);
  save_jsonl(out.tasks, (dir / "tasks.jsonl").string());
  save_jsonl(out.records, (dir / "metrics.jsonl").string());
  save_jsonl(out.profiles, (dir / "efficiency.jsonl").string());
}

SynthSpec default_spec() {
  SynthSpec spec;
  spec.seed = 42;
  spec.n_per_task = 200;
  spec.models = {
      {"gen_fast_a", 7.4, 1.2, 1080.0},
      {"gen_fast_b", 7.1, 1.2, 1110.0},
      {"gen_mid", 4.6, 1.2, 1470.0},
      {"gen_slow_a", 2.1, 1.0, 2320.0},
      {"gen_slow_b", 1.8, 1.0, 2410.0},
  };
  spec.evaluators = {
      {"ev_sts", 0.90, 0.6, 0.9},
      {"ev_ce_a", 0.0, 2.0, 1.0},
      {"ev_ce_b", -0.25, 2.0, 5.9},
  };
  return spec;
}

SynthSpec load_spec(const std::string& path) {
  if (!std::filesystem::exists(path)) throw MissingInputError("no such file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingInputError("cannot open: " + path);

  njson j = njson::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw ValidationError("malformed spec file: " + path);

  auto num = [&](const njson& o, const char* key) -> double {
    if (!o.contains(key) || !o.at(key).is_number())
      throw ValidationError(std::string("spec field '") + key + "' missing or not a number");
    return o.at(key).get<double>();
  };
  auto str = [&](const njson& o, const char* key) -> std::string {
    if (!o.contains(key) || !o.at(key).is_string())
      throw ValidationError(std::string("spec field '") + key + "' missing or not a string");
    return o.at(key).get<std::string>();
  };

  SynthSpec spec;
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned())
      throw ValidationError("spec field 'seed' must be a non-negative integer");
    spec.seed = j.at("seed").get<uint64_t>();
  }
  if (j.contains("n_per_task")) {
    if (!j.at("n_per_task").is_number_integer())
      throw ValidationError("spec field 'n_per_task' must be an integer");
    spec.n_per_task = j.at("n_per_task").get<int>();
  }
  if (!j.contains("models") || !j.at("models").is_array())
    throw ValidationError("spec field 'models' missing or not an array");
  if (!j.contains("evaluators") || !j.at("evaluators").is_array())
    throw ValidationError("spec field 'evaluators' missing or not an array");

  spec.models.clear();
  for (const njson& o : j.at("models"))
    spec.models.push_back(
        {str(o, "model_key"), num(o, "quality_mean"), num(o, "quality_sd"),
         num(o, "latency_ms")});
  spec.evaluators.clear();
  for (const njson& o : j.at("evaluators"))
    spec.evaluators.push_back(
        {str(o, "evaluator_key"), num(o, "fidelity"), num(o, "noise_sd"),
         num(o, "latency_ms")});

  validate_spec(spec);
  return spec;
}

void save_spec(const SynthSpec& spec, const std::string& path) {
  ojson j;
  j["seed"] = spec.seed;
  j["n_per_task"] = spec.n_per_task;
  ojson models = ojson::array();
  for (const ModelProfile& m : spec.models) {
    ojson o;
    o["model_key"] = m.model_key;
    o["quality_mean"] = m.quality_mean;
    o["quality_sd"] = m.quality_sd;
    o["latency_ms"] = m.latency_ms;
    models.push_back(std::move(o));
  }
  j["models"] = std::move(models);
  ojson evaluators = ojson::array();
  for (const EvaluatorProfile& e : spec.evaluators) {
    ojson o;
    o["evaluator_key"] = e.evaluator_key;
    o["fidelity"] = e.fidelity;
    o["noise_sd"] = e.noise_sd;
    o["latency_ms"] = e.latency_ms;
    evaluators.push_back(std::move(o));
  }
  j["evaluators"] = std::move(evaluators);

  std::ofstream out = jsonl::open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace poqsim
