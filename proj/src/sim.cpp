#include "poqsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <set>
#include <utility>

#include "jsonl_util.hpp"
#include "poqsim/csv.hpp"
#include "poqsim/rng.hpp"

namespace poqsim {

namespace {

using ojson = nlohmann::ordered_json;

// Precomputed view of the inputs so the round loop is lookup-only.
struct SimInputs {
  std::vector<std::string> tasks;
  std::vector<const NodeCost*> models;
  std::vector<const NodeCost*> evaluators;
  std::map<std::string, double> evaluator_costs;
  // scores[task_index][model_index][evaluator_index], NaN = no score
  std::vector<std::vector<std::vector<double>>> scores;
};

SimInputs prepare(const std::vector<TaskRecord>& corpus,
                  const std::vector<GenerationRecord>& records,
                  const std::vector<NodeCost>& costs) {
  if (corpus.empty()) throw ValidationError("empty corpus");

  SimInputs in;
  std::map<std::string, std::size_t> task_index;
  for (const TaskRecord& t : corpus) {
    if (!task_index.emplace(t.id, in.tasks.size()).second)
      throw ValidationError("duplicate corpus id '" + t.id + "'");
    in.tasks.push_back(t.id);
  }

  std::map<std::string, std::size_t> model_index;
  std::map<std::string, std::size_t> evaluator_index;
  for (const NodeCost& c : costs) {
    if (c.node_type == NodeType::inference) {
      if (!model_index.emplace(c.node_key, in.models.size()).second)
        throw ValidationError("duplicate cost entry '" + c.node_key + "'");
      in.models.push_back(&c);
    } else {
      if (!evaluator_index.emplace(c.node_key, in.evaluators.size()).second)
        throw ValidationError("duplicate cost entry '" + c.node_key + "'");
      in.evaluators.push_back(&c);
      in.evaluator_costs[c.node_key] = c.cost_norm;
    }
  }
  if (in.models.empty()) throw ValidationError("no inference nodes in cost list");
  if (in.evaluators.empty()) throw ValidationError("no evaluator nodes in cost list");

  double nan = std::numeric_limits<double>::quiet_NaN();
  in.scores.assign(in.tasks.size(),
                   std::vector<std::vector<double>>(
                       in.models.size(), std::vector<double>(in.evaluators.size(), nan)));

  std::set<std::pair<std::string, std::string>> seen;
  for (const GenerationRecord& r : records) {
    auto t_it = task_index.find(r.id);
    if (t_it == task_index.end())
      throw ValidationError("record id '" + r.id + "' not in corpus");
    auto m_it = model_index.find(r.model_key);
    if (m_it == model_index.end())
      throw ValidationError("model '" + r.model_key + "' has no cost entry");
    if (!seen.insert({r.id, r.model_key}).second)
      throw ValidationError("duplicate record ('" + r.id + "', '" + r.model_key + "')");
    for (const auto& [key, score] : r.eval_scores) {
      auto e_it = evaluator_index.find(key);
      if (e_it == evaluator_index.end())
        throw ValidationError("evaluator '" + key + "' has no cost entry");
      if (!score.norm) continue;  // raw-only scores are not usable yet
      if (!in_score_range(*score.norm))
        throw ValidationError("norm score out of [0,10] for ('" + r.id + "', '" +
                              r.model_key + "', '" + key + "')");
      in.scores[t_it->second][m_it->second][e_it->second] = *score.norm;
    }
  }
  return in;
}

}  // namespace

std::string to_string(Scheduling s) {
  switch (s) {
    case Scheduling::uniform: return "uniform";
  }
  throw Error("bad Scheduling value");
}

std::string to_string(KPolicy p) {
  switch (p) {
    case KPolicy::fixed: return "fixed";
    case KPolicy::uniform_1_to_3: return "uniform_1_to_3";
  }
  throw Error("bad KPolicy value");
}

Scheduling scheduling_from_string(const std::string& s) {
  if (s == "uniform") return Scheduling::uniform;
  throw ValidationError("unknown scheduling '" + s + "'");
}

KPolicy k_policy_from_string(const std::string& s) {
  if (s == "fixed") return KPolicy::fixed;
  if (s == "uniform_1_to_3") return KPolicy::uniform_1_to_3;
  throw ValidationError("unknown k_policy '" + s + "'");
}

void validate_config(const SimConfig& config) {
  if (config.rounds <= 0) throw ValidationError("rounds must be > 0");
  validate_params(config.params);
}

SimResult run_simulation(const SimConfig& config, const std::vector<TaskRecord>& corpus,
                         const std::vector<GenerationRecord>& records,
                         const std::vector<NodeCost>& costs, bool keep_trace) {
  validate_config(config);
  SimInputs in = prepare(corpus, records, costs);
  if (config.k_policy == KPolicy::fixed &&
      static_cast<std::size_t>(config.params.k) > in.evaluators.size())
    throw ValidationError("k exceeds evaluator pool size");

  SimResult result;
  for (const NodeCost* c : in.models)
    result.stats.push_back({c->node_key, NodeType::inference, 0.0, 0, 0.0, c->cost_norm,
                            c->avg_latency_ms});
  std::size_t eval_base = result.stats.size();
  for (const NodeCost* c : in.evaluators)
    result.stats.push_back(
        {c->node_key, NodeType::eval, 0.0, 0, 0.0, c->cost_norm, c->avg_latency_ms});

  Rng rng(config.seed);
  std::vector<std::size_t> avail;
  std::vector<ScoredEvaluator> committee;

  for (int64_t round = 0; round < config.rounds; ++round) {
    std::size_t t = rng.below(in.tasks.size());
    std::size_t m = rng.below(in.models.size());
    int k_target = config.params.k;
    if (config.k_policy == KPolicy::uniform_1_to_3)
      k_target = 1 + static_cast<int>(rng.below(3));

    const std::vector<double>& row = in.scores[t][m];
    avail.clear();
    for (std::size_t e = 0; e < row.size(); ++e)
      if (!std::isnan(row[e])) avail.push_back(e);

    if (avail.empty()) {
      ++result.skipped_rounds;
      continue;
    }
    std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k_target), avail.size());
    if (k_eff < static_cast<std::size_t>(k_target)) ++result.degraded_rounds;

    for (std::size_t j = 0; j < k_eff; ++j) {
      std::size_t pick = j + rng.below(avail.size() - j);
      std::swap(avail[j], avail[pick]);
    }

    committee.clear();
    for (std::size_t j = 0; j < k_eff; ++j)
      committee.push_back({in.evaluators[avail[j]]->node_key, row[avail[j]]});

    RoundOutcome outcome = run_round(in.tasks[t], in.models[m]->node_key, committee,
                                     in.models[m]->cost_norm, in.evaluator_costs,
                                     config.params);

    NodeStats& model_stats = result.stats[m];
    model_stats.total_reward += outcome.inference_reward;
    ++model_stats.job_count;
    for (std::size_t j = 0; j < k_eff; ++j) {
      NodeStats& eval_stats = result.stats[eval_base + avail[j]];
      eval_stats.total_reward += outcome.per_evaluator[j].reward;
      ++eval_stats.job_count;
    }
    ++result.executed_rounds;
    if (keep_trace) result.trace.push_back(std::move(outcome));
  }

  for (NodeStats& s : result.stats)
    s.avg_reward = s.job_count > 0 ? s.total_reward / static_cast<double>(s.job_count) : 0.0;
  return result;
}

std::vector<SweepPoint> sweep(const SimConfig& base, const SweepGrid& grid,
                              const std::vector<TaskRecord>& corpus,
                              const std::vector<GenerationRecord>& records,
                              const std::vector<NodeCost>& costs) {
  auto axis = [](const std::vector<double>& v, double fallback) {
    return v.empty() ? std::vector<double>{fallback} : v;
  };
  std::vector<double> alpha_f = axis(grid.alpha_f, base.params.alpha_f);
  std::vector<double> beta_f = axis(grid.beta_f, base.params.beta_f);
  std::vector<double> alpha_m = axis(grid.alpha_m, base.params.alpha_m);
  std::vector<double> beta_m = axis(grid.beta_m, base.params.beta_m);
  std::vector<int> k = grid.k.empty() ? std::vector<int>{base.params.k} : grid.k;

  std::vector<SweepPoint> points;
  uint64_t flat = 0;
  for (double af : alpha_f)
    for (double bf : beta_f)
      for (double am : alpha_m)
        for (double bm : beta_m)
          for (int kv : k) {
            SweepPoint p;
            p.config = base;
            p.config.params.alpha_f = af;
            p.config.params.beta_f = bf;
            p.config.params.alpha_m = am;
            p.config.params.beta_m = bm;
            p.config.params.k = kv;
            p.config.seed = derive_seed(base.seed, flat++);
            p.label = "alpha_f=" + format_double(af) + ",beta_f=" + format_double(bf) +
                      ",alpha_m=" + format_double(am) + ",beta_m=" + format_double(bm) +
                      ",k=" + std::to_string(kv);
            validate_config(p.config);
            points.push_back(std::move(p));
          }

  std::vector<std::future<SimResult>> futures;
  futures.reserve(points.size());
  for (const SweepPoint& p : points)
    futures.push_back(std::async(std::launch::async, [&, config = p.config] {
      return run_simulation(config, corpus, records, costs);
    }));
  for (std::size_t i = 0; i < points.size(); ++i) points[i].result = futures[i].get();
  return points;
}

void write_stats_csv(const std::vector<NodeStats>& stats, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  out << "node_type,node_key,avg_reward,avg_latency_ms,cost_norm,jobs\n";
  for (const NodeStats& s : stats) {
    out << to_string(s.node_type) << ',' << csv_escape(s.node_key) << ','
        << format_double(s.avg_reward) << ',' << format_double(s.avg_latency_ms) << ','
        << format_double(s.cost_norm) << ',' << s.job_count << '\n';
  }
}

void write_trace_jsonl(const std::vector<RoundOutcome>& trace, const std::string& path) {
  std::ofstream out = jsonl::open_out(path);
  for (const RoundOutcome& r : trace) {
    ojson j;
    j["record_id"] = r.record_id;
    j["model_key"] = r.model_key;
    j["evaluator_subset"] = r.evaluator_subset;
    j["consensus_q"] = r.consensus_q;
    j["inference_reward"] = r.inference_reward;
    ojson evals = ojson::array();
    for (const EvaluatorOutcome& e : r.per_evaluator) {
      ojson o;
      o["evaluator_key"] = e.evaluator_key;
      o["norm_score"] = e.norm_score;
      o["deviation"] = e.deviation;
      o["closeness"] = e.closeness;
      o["reward"] = e.reward;
      evals.push_back(std::move(o));
    }
    j["evaluators"] = std::move(evals);
    out << j.dump() << '\n';
  }
}

}  // namespace poqsim
