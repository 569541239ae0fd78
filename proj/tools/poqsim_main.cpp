#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poqsim/analysis.hpp"
#include "poqsim/config.hpp"
#include "poqsim/csv.hpp"
#include "poqsim/errors.hpp"
#include "poqsim/gt_metrics.hpp"
#include "poqsim/manifest.hpp"
#include "poqsim/normalize.hpp"
#include "poqsim/poq.hpp"
#include "poqsim/records.hpp"
#include "poqsim/sim.hpp"
#include "poqsim/synth.hpp"
#include "poqsim/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace poqsim;

void ensure_parent_dir(const std::string& path) {
  fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

RunManifest base_manifest(const std::string& command) {
  RunManifest m;
  m.command = command;
  m.tool_version = kVersion;
  return m;
}

void add_inputs(RunManifest& m, const std::vector<std::string>& paths) {
  for (const std::string& p : paths) m.inputs.push_back(digest_file(p));
}

void add_outputs(RunManifest& m, const std::vector<std::string>& paths) {
  for (const std::string& p : paths) m.outputs.push_back(digest_file(p));
}

std::vector<double> parse_double_list(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    try {
      std::size_t used = 0;
      double v = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("bad value in " + flag + ": '" + item + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& flag, const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(flag, text)) {
    int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
      throw ValidationError("bad value in " + flag + ": expected integer");
    out.push_back(i);
  }
  return out;
}

// Raw sim-config values from the command line; strings so that the
// same layered parsing handles files, environment and flags alike.
struct SimFlagValues {
  std::string config_path;
  std::string rounds, seed, alpha_f, beta_f, alpha_m, beta_m, k, k_policy, scheduling;
};

void add_sim_options(CLI::App* cmd, SimFlagValues& v) {
  cmd->add_option("--config", v.config_path, "key=value config file");
  cmd->add_option("--rounds", v.rounds, "number of consensus rounds");
  cmd->add_option("--seed", v.seed, "RNG seed");
  cmd->add_option("--alpha-f", v.alpha_f, "inference quality weight");
  cmd->add_option("--beta-f", v.beta_f, "inference cost weight");
  cmd->add_option("--alpha-m", v.alpha_m, "evaluator closeness weight");
  cmd->add_option("--beta-m", v.beta_m, "evaluator cost weight");
  cmd->add_option("--k", v.k, "committee size");
  cmd->add_option("--k-policy", v.k_policy, "fixed or uniform_1_to_3");
  cmd->add_option("--scheduling", v.scheduling, "node scheduling policy");
}

SimConfig resolve_from_flags(const CLI::App* cmd, const SimFlagValues& v) {
  ConfigMap file;
  if (!v.config_path.empty()) file = parse_config_file(v.config_path);

  ConfigMap flags;
  auto put = [&](const char* flag, const char* key, const std::string& value) {
    if (cmd->count(flag)) flags[key] = value;
  };
  put("--rounds", "rounds", v.rounds);
  put("--seed", "seed", v.seed);
  put("--alpha-f", "alpha_f", v.alpha_f);
  put("--beta-f", "beta_f", v.beta_f);
  put("--alpha-m", "alpha_m", v.alpha_m);
  put("--beta-m", "beta_m", v.beta_m);
  put("--k", "k", v.k);
  put("--k-policy", "k_policy", v.k_policy);
  put("--scheduling", "scheduling", v.scheduling);

  return resolve_sim_config(file, env_overrides(), flags);
}

int cmd_validate(const std::vector<std::string>& tasks, const std::vector<std::string>& metrics,
                 const std::vector<std::string>& efficiency,
                 const std::vector<std::string>& judge) {
  if (tasks.empty() && metrics.empty() && efficiency.empty() && judge.empty())
    throw ValidationError("nothing to validate: pass --tasks/--metrics/--efficiency/--judge");
  for (const std::string& p : tasks)
    std::cout << "ok " << p << " (" << load_corpus(p).size() << " tasks)\n";
  for (const std::string& p : metrics)
    std::cout << "ok " << p << " (" << load_generations(p).size() << " records)\n";
  for (const std::string& p : efficiency)
    std::cout << "ok " << p << " (" << load_efficiency(p).size() << " profiles)\n";
  for (const std::string& p : judge)
    std::cout << "ok " << p << " (" << load_judge_results(p).size() << " judgements)\n";
  return 0;
}

int cmd_score_gt(const std::string& metrics_path, const std::string& out_path) {
  std::vector<GenerationRecord> records = score_generations(load_generations(metrics_path));
  ensure_parent_dir(out_path);
  save_jsonl(records, out_path);

  RunManifest m = base_manifest("score-gt");
  add_inputs(m, {metrics_path});
  add_outputs(m, {out_path});
  write_manifest(m, out_path + ".manifest.json");
  std::cout << "scored " << records.size() << " records -> " << out_path << "\n";
  return 0;
}

int cmd_normalize(const std::string& metrics_path, const std::string& out_path,
                  const std::string& spans_path) {
  NormalizeResult result = normalize_records(load_generations(metrics_path));
  ensure_parent_dir(out_path);
  save_jsonl(result.records, out_path);
  std::vector<std::string> outputs{out_path};
  if (!spans_path.empty()) {
    ensure_parent_dir(spans_path);
    save_spans(result.spans, spans_path);
    outputs.push_back(spans_path);
  }

  RunManifest m = base_manifest("normalize");
  add_inputs(m, {metrics_path});
  add_outputs(m, outputs);
  write_manifest(m, out_path + ".manifest.json");
  std::cout << "normalized " << result.records.size() << " records, " << result.spans.size()
            << " spans -> " << out_path << "\n";
  return 0;
}

int cmd_costs(const std::string& efficiency_path, const std::string& out_path) {
  std::vector<EfficiencyProfile> profiles = load_efficiency(efficiency_path);
  std::vector<NodeCost> costs;
  for (NodeType t : {NodeType::inference, NodeType::eval})
    for (NodeCost& c : latency_costs(profiles, t)) costs.push_back(std::move(c));
  ensure_parent_dir(out_path);
  save_costs(costs, out_path);

  RunManifest m = base_manifest("costs");
  add_inputs(m, {efficiency_path});
  add_outputs(m, {out_path});
  write_manifest(m, out_path + ".manifest.json");
  std::cout << "normalized costs for " << costs.size() << " nodes -> " << out_path << "\n";
  return 0;
}

int cmd_simulate(const SimConfig& config, const std::string& tasks_path,
                 const std::string& metrics_path, const std::string& costs_path,
                 const std::string& stats_path, const std::string& trace_path) {
  std::vector<TaskRecord> corpus = load_corpus(tasks_path);
  std::vector<GenerationRecord> records = load_generations(metrics_path);
  std::vector<NodeCost> costs = load_costs(costs_path);

  SimResult result = run_simulation(config, corpus, records, costs, !trace_path.empty());
  ensure_parent_dir(stats_path);
  write_stats_csv(result.stats, stats_path);
  std::vector<std::string> outputs{stats_path};
  if (!trace_path.empty()) {
    ensure_parent_dir(trace_path);
    write_trace_jsonl(result.trace, trace_path);
    outputs.push_back(trace_path);
  }

  RunManifest m = base_manifest("simulate");
  m.seed = config.seed;
  m.config = config_as_map(config);
  add_inputs(m, {tasks_path, metrics_path, costs_path});
  add_outputs(m, outputs);
  write_manifest(m, stats_path + ".manifest.json");
  std::cout << "executed " << result.executed_rounds << " rounds (" << result.skipped_rounds
            << " skipped, " << result.degraded_rounds << " degraded) -> " << stats_path
            << "\n";
  return 0;
}

int cmd_sweep(const SimConfig& base, const SweepGrid& grid, const std::string& tasks_path,
              const std::string& metrics_path, const std::string& costs_path,
              const std::string& out_dir) {
  std::vector<TaskRecord> corpus = load_corpus(tasks_path);
  std::vector<GenerationRecord> records = load_generations(metrics_path);
  std::vector<NodeCost> costs = load_costs(costs_path);

  std::vector<SweepPoint> points = sweep(base, grid, corpus, records, costs);
  fs::create_directories(out_dir);
  fs::path dir(out_dir);

  std::vector<std::string> outputs;
  std::string index_path = (dir / "sweep_index.csv").string();
  {
    std::ofstream index(index_path, std::ios::binary);
    if (!index) throw Error("cannot write: " + index_path);
    index << "index,alpha_f,beta_f,alpha_m,beta_m,k,seed,executed_rounds,degraded_rounds,"
             "skipped_rounds,stats_file\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
      const SweepPoint& p = points[i];
      char name[32];
      std::snprintf(name, sizeof(name), "point_%04zu_stats.csv", i);
      std::string stats_path = (dir / name).string();
      write_stats_csv(p.result.stats, stats_path);
      outputs.push_back(stats_path);
      index << i << ',' << format_double(p.config.params.alpha_f) << ','
            << format_double(p.config.params.beta_f) << ','
            << format_double(p.config.params.alpha_m) << ','
            << format_double(p.config.params.beta_m) << ',' << p.config.params.k << ','
            << p.config.seed << ',' << p.result.executed_rounds << ','
            << p.result.degraded_rounds << ',' << p.result.skipped_rounds << ',' << name
            << '\n';
    }
  }
  outputs.push_back(index_path);

  RunManifest m = base_manifest("sweep");
  m.seed = base.seed;
  m.config = config_as_map(base);
  add_inputs(m, {tasks_path, metrics_path, costs_path});
  add_outputs(m, outputs);
  write_manifest(m, (dir / "manifest.json").string());
  std::cout << "swept " << points.size() << " grid points -> " << out_dir << "\n";
  return 0;
}

int cmd_analyze(const std::string& metrics_path, const std::string& efficiency_path,
                const std::string& out_dir) {
  std::vector<GenerationRecord> records = load_generations(metrics_path);
  std::vector<EfficiencyProfile> profiles = load_efficiency(efficiency_path);

  std::set<std::string> evaluators;
  bool any_gt = false, any_judge = false;
  for (const GenerationRecord& r : records) {
    for (const auto& [key, score] : r.eval_scores) evaluators.insert(key);
    any_gt = any_gt || r.gt_score.has_value();
    any_judge = any_judge || r.judge_score.has_value();
  }

  std::vector<ReferenceSignal> references;
  std::vector<std::string> notes;
  if (any_gt) references.push_back(ReferenceSignal::gt);
  else notes.push_back("no gt scores present, gt correlations skipped");
  if (any_judge) references.push_back(ReferenceSignal::judge);
  else notes.push_back("no judge scores present, judge correlations skipped");

  std::vector<CorrelationRow> rows;
  for (const std::string& key : evaluators) {
    for (ReferenceSignal ref : references) {
      CorrelationResult report = correlation_report(records, key, ref);
      rows.insert(rows.end(), report.rows.begin(), report.rows.end());
      for (const std::string& note : report.notes)
        notes.push_back(key + "/" + to_string(ref) + " " + note);
    }
  }

  fs::create_directories(out_dir);
  fs::path dir(out_dir);
  std::string correlation_path = (dir / "correlation.csv").string();
  std::string frontier_path = (dir / "frontier.csv").string();
  write_correlation_csv(rows, correlation_path);
  write_frontier_csv(efficiency_frontier(records, profiles), frontier_path);

  RunManifest m = base_manifest("analyze");
  add_inputs(m, {metrics_path, efficiency_path});
  add_outputs(m, {correlation_path, frontier_path});
  write_manifest(m, (dir / "manifest.json").string());

  for (const std::string& note : notes) std::cout << "note: " << note << "\n";
  std::cout << "wrote " << correlation_path << " and " << frontier_path << "\n";
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir) {
  SynthSpec spec = spec_path.empty() ? default_spec() : load_spec(spec_path);
  generate_files(spec, out_dir);
  fs::path dir(out_dir);
  std::string spec_out = (dir / "spec.json").string();
  save_spec(spec, spec_out);

  RunManifest m = base_manifest("synth");
  m.seed = spec.seed;
  m.config = {{"seed", std::to_string(spec.seed)},
              {"n_per_task", std::to_string(spec.n_per_task)}};
  if (!spec_path.empty()) add_inputs(m, {spec_path});
  add_outputs(m, {(dir / "tasks.jsonl").string(), (dir / "metrics.jsonl").string(),
                  (dir / "efficiency.jsonl").string(), spec_out});
  write_manifest(m, (dir / "manifest.json").string());
  std::cout << "generated synthetic fixture (seed " << spec.seed << ") -> " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-aware proof-of-quality reward simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "validate record files");
  std::vector<std::string> v_tasks, v_metrics, v_efficiency, v_judge;
  validate->add_option("--tasks", v_tasks, "task corpus JSONL");
  validate->add_option("--metrics", v_metrics, "generation records JSONL");
  validate->add_option("--efficiency", v_efficiency, "efficiency profiles JSONL");
  validate->add_option("--judge", v_judge, "judge results JSONL");

  auto* score_gt = app.add_subcommand("score-gt", "fill gt_score from token-level F1");
  std::string sg_metrics, sg_out;
  score_gt->add_option("--metrics", sg_metrics, "generation records JSONL")->required();
  score_gt->add_option("--out", sg_out, "scored records JSONL")->required();

  auto* normalize = app.add_subcommand("normalize", "min-max normalize evaluator scores");
  std::string n_metrics, n_out, n_spans;
  normalize->add_option("--metrics", n_metrics, "generation records JSONL")->required();
  normalize->add_option("--out", n_out, "normalized records JSONL")->required();
  normalize->add_option("--spans-out", n_spans, "fitted spans JSONL");

  auto* costs = app.add_subcommand("costs", "normalize node latencies to [0,1]");
  std::string c_efficiency, c_out;
  costs->add_option("--efficiency", c_efficiency, "efficiency profiles JSONL")->required();
  costs->add_option("--out", c_out, "node costs JSONL")->required();

  auto* simulate = app.add_subcommand("simulate", "run seeded consensus rounds");
  std::string s_tasks, s_metrics, s_costs, s_stats, s_trace;
  SimFlagValues s_flags;
  simulate->add_option("--tasks", s_tasks, "task corpus JSONL")->required();
  simulate->add_option("--metrics", s_metrics, "generation records JSONL")->required();
  simulate->add_option("--costs", s_costs, "node costs JSONL")->required();
  simulate->add_option("--stats-out", s_stats, "per-node stats CSV")->required();
  simulate->add_option("--trace-out", s_trace, "per-round trace JSONL");
  add_sim_options(simulate, s_flags);

  auto* sweep_cmd = app.add_subcommand("sweep", "simulate over a parameter grid");
  std::string w_tasks, w_metrics, w_costs, w_out_dir;
  std::string w_grid_af, w_grid_bf, w_grid_am, w_grid_bm, w_grid_k;
  SimFlagValues w_flags;
  sweep_cmd->add_option("--tasks", w_tasks, "task corpus JSONL")->required();
  sweep_cmd->add_option("--metrics", w_metrics, "generation records JSONL")->required();
  sweep_cmd->add_option("--costs", w_costs, "node costs JSONL")->required();
  sweep_cmd->add_option("--out-dir", w_out_dir, "output directory")->required();
  sweep_cmd->add_option("--grid-alpha-f", w_grid_af, "comma-separated alpha_f values");
  sweep_cmd->add_option("--grid-beta-f", w_grid_bf, "comma-separated beta_f values");
  sweep_cmd->add_option("--grid-alpha-m", w_grid_am, "comma-separated alpha_m values");
  sweep_cmd->add_option("--grid-beta-m", w_grid_bm, "comma-separated beta_m values");
  sweep_cmd->add_option("--grid-k", w_grid_k, "comma-separated committee sizes");
  add_sim_options(sweep_cmd, w_flags);

  auto* analyze = app.add_subcommand("analyze", "correlation and efficiency reports");
  std::string a_metrics, a_efficiency, a_out_dir;
  analyze->add_option("--metrics", a_metrics, "generation records JSONL")->required();
  analyze->add_option("--efficiency", a_efficiency, "efficiency profiles JSONL")->required();
  analyze->add_option("--out-dir", a_out_dir, "output directory")->required();

  auto* synth = app.add_subcommand("synth", "generate a synthetic fixture");
  std::string y_spec, y_out_dir;
  synth->add_option("--spec", y_spec, "generator spec JSON");
  synth->add_option("--out-dir", y_out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return cmd_validate(v_tasks, v_metrics, v_efficiency, v_judge);
    if (*score_gt) return cmd_score_gt(sg_metrics, sg_out);
    if (*normalize) return cmd_normalize(n_metrics, n_out, n_spans);
    if (*costs) return cmd_costs(c_efficiency, c_out);
    if (*simulate)
      return cmd_simulate(resolve_from_flags(simulate, s_flags), s_tasks, s_metrics, s_costs,
                          s_stats, s_trace);
    if (*sweep_cmd) {
      SweepGrid grid;
      if (!w_grid_af.empty()) grid.alpha_f = parse_double_list("--grid-alpha-f", w_grid_af);
      if (!w_grid_bf.empty()) grid.beta_f = parse_double_list("--grid-beta-f", w_grid_bf);
      if (!w_grid_am.empty()) grid.alpha_m = parse_double_list("--grid-alpha-m", w_grid_am);
      if (!w_grid_bm.empty()) grid.beta_m = parse_double_list("--grid-beta-m", w_grid_bm);
      if (!w_grid_k.empty()) grid.k = parse_int_list("--grid-k", w_grid_k);
      return cmd_sweep(resolve_from_flags(sweep_cmd, w_flags), grid, w_tasks, w_metrics,
                       w_costs, w_out_dir);
    }
    if (*analyze) return cmd_analyze(a_metrics, a_efficiency, a_out_dir);
    if (*synth) return cmd_synth(y_spec, y_out_dir);
    throw Error("no subcommand dispatched");
  } catch (const MissingInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
