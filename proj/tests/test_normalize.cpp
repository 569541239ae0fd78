#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "poqsim/normalize.hpp"

using namespace poqsim;
namespace fs = std::filesystem;

namespace {

GenerationRecord rec(const std::string& id, TaskType t, const std::string& evaluator,
                     double raw) {
  GenerationRecord r;
  r.id = id;
  r.dataset = Dataset::synthetic;
  r.task_type = t;
  r.model_key = "m";
  r.eval_scores[evaluator] = EvalScore{raw, std::nullopt};
  return r;
}

fs::path temp_file(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / "poqsim_normalize_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("fit_spans finds per-task min and max") {
  std::vector<GenerationRecord> records{
      rec("q1", TaskType::qa, "ev", 0.2), rec("q2", TaskType::qa, "ev", -1.5),
      rec("q3", TaskType::qa, "ev", 3.0), rec("s1", TaskType::summarization, "ev", 0.5)};
  records.push_back(rec("q4", TaskType::qa, "other", 99.0));

  std::vector<NormalizationSpan> spans = fit_spans(records, "ev");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0].task_type == TaskType::qa);
  CHECK(spans[0].min_raw == -1.5);
  CHECK(spans[0].max_raw == 3.0);
  CHECK(spans[1].task_type == TaskType::summarization);
  CHECK(spans[1].min_raw == 0.5);
  CHECK(spans[1].max_raw == 0.5);

  // a task type with no scores for the evaluator is omitted
  std::vector<NormalizationSpan> other = fit_spans(records, "other");
  REQUIRE(other.size() == 1);
  CHECK(other[0].task_type == TaskType::qa);

  CHECK_THROWS_AS(fit_spans(records, "missing"), ValidationError);
}

TEST_CASE("apply_span maps linearly, clamps, and centers degenerate spans") {
  NormalizationSpan span{"ev", TaskType::qa, 2.0, 4.0};
  CHECK(apply_span(2.0, span) == 0.0);
  CHECK(apply_span(4.0, span) == 10.0);
  CHECK(apply_span(3.0, span) == 5.0);
  CHECK(apply_span(2.5, span) == 2.5);
  CHECK(apply_span(1.0, span) == 0.0);   // below span clamps
  CHECK(apply_span(9.0, span) == 10.0);  // above span clamps

  NormalizationSpan degenerate{"ev", TaskType::qa, 3.0, 3.0};
  CHECK(apply_span(3.0, degenerate) == 5.0);
  CHECK(apply_span(-100.0, degenerate) == 5.0);
}

TEST_CASE("latency_costs reproduces the min-max profile of a five-node pool") {
  std::vector<EfficiencyProfile> profiles{
      {"node_a", NodeType::inference, 1108.0, 1.0, 1.0, 1},
      {"node_b", NodeType::inference, 1077.7, 1.0, 1.0, 1},
      {"node_c", NodeType::inference, 2409.3, 1.0, 1.0, 1},
      {"node_d", NodeType::inference, 2320.6, 1.0, 1.0, 1},
      {"node_e", NodeType::inference, 1470.1, 1.0, 1.0, 1},
      {"ev_a", NodeType::eval, 1.0, 1.0, 1.0, 1},
      {"ev_b", NodeType::eval, 5.9, 1.0, 1.0, 1},
      {"ev_c", NodeType::eval, 0.9, 1.0, 1.0, 1},
  };

  std::vector<NodeCost> inference = latency_costs(profiles, NodeType::inference);
  REQUIRE(inference.size() == 5);
  double expected[] = {0.023, 0.000, 1.000, 0.933, 0.295};
  for (std::size_t i = 0; i < 5; ++i) {
    CAPTURE(inference[i].node_key);
    CHECK(std::abs(inference[i].cost_norm - expected[i]) <= 0.001);
  }
  CHECK(inference[0].avg_latency_ms == 1108.0);

  std::vector<NodeCost> eval = latency_costs(profiles, NodeType::eval);
  REQUIRE(eval.size() == 3);
  CHECK(std::abs(eval[0].cost_norm - 0.02) <= 0.001);
  CHECK(eval[1].cost_norm == 1.0);
  CHECK(eval[2].cost_norm == 0.0);
}

TEST_CASE("latency_costs edge pools") {
  std::vector<EfficiencyProfile> single{{"only", NodeType::inference, 100.0, 1.0, 1.0, 1}};
  std::vector<NodeCost> costs = latency_costs(single, NodeType::inference);
  REQUIRE(costs.size() == 1);
  CHECK(costs[0].cost_norm == 0.0);

  std::vector<EfficiencyProfile> equal{{"a", NodeType::eval, 5.0, 1.0, 1.0, 1},
                                       {"b", NodeType::eval, 5.0, 1.0, 1.0, 1}};
  for (const NodeCost& c : latency_costs(equal, NodeType::eval)) CHECK(c.cost_norm == 0.0);

  CHECK_THROWS_AS(latency_costs(single, NodeType::eval), ValidationError);
  CHECK_THROWS_AS(latency_costs({}, NodeType::inference), ValidationError);
}

TEST_CASE("normalize_records fills norms for every raw score") {
  std::vector<GenerationRecord> records{
      rec("q1", TaskType::qa, "ev", 0.0), rec("q2", TaskType::qa, "ev", 1.0),
      rec("q3", TaskType::qa, "ev", 0.25), rec("s1", TaskType::summarization, "ev", -4.0),
      rec("s2", TaskType::summarization, "ev", 4.0)};
  records[0].eval_scores["second"] = EvalScore{10.0, std::nullopt};
  records[1].eval_scores["second"] = EvalScore{30.0, std::nullopt};

  NormalizeResult result = normalize_records(records);
  CHECK(result.spans.size() == 3);  // ev: qa+sum, second: qa
  CHECK(*result.records[0].eval_scores.at("ev").norm == 0.0);
  CHECK(*result.records[1].eval_scores.at("ev").norm == 10.0);
  CHECK(*result.records[2].eval_scores.at("ev").norm == 2.5);
  CHECK(*result.records[3].eval_scores.at("ev").norm == 0.0);
  CHECK(*result.records[4].eval_scores.at("ev").norm == 10.0);
  CHECK(*result.records[0].eval_scores.at("second").norm == 0.0);
  CHECK(*result.records[1].eval_scores.at("second").norm == 10.0);

  // qa and summarization are normalized independently
  for (const NormalizationSpan& s : result.spans) {
    if (s.evaluator_key == "ev" && s.task_type == TaskType::qa) {
      CHECK(s.min_raw == 0.0);
      CHECK(s.max_raw == 1.0);
    }
    if (s.evaluator_key == "ev" && s.task_type == TaskType::summarization) {
      CHECK(s.min_raw == -4.0);
      CHECK(s.max_raw == 4.0);
    }
  }
}

TEST_CASE("spans and costs round trip through jsonl sidecars") {
  std::vector<NormalizationSpan> spans{{"ev", TaskType::qa, -1.0, 2.5},
                                       {"ev", TaskType::summarization, 0.0, 0.0}};
  fs::path spath = temp_file("spans.jsonl");
  save_spans(spans, spath.string());
  CHECK(load_spans(spath.string()) == spans);

  std::vector<NodeCost> costs{{"f1", NodeType::inference, 0.0, 1077.7},
                              {"m1", NodeType::eval, 1.0, 5.9}};
  fs::path cpath = temp_file("costs.jsonl");
  save_costs(costs, cpath.string());
  CHECK(load_costs(cpath.string()) == costs);

  CHECK_THROWS_AS(load_spans("/nonexistent/spans.jsonl"), MissingInputError);
  CHECK_THROWS_AS(load_costs("/nonexistent/costs.jsonl"), MissingInputError);
}
