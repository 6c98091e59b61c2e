#include "hind/cli.hpp"

#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hind/answer.hpp"
#include "hind/dataset.hpp"
#include "hind/hindsight.hpp"
#include "hind/http_backend.hpp"
#include "hind/kepo.hpp"
#include "hind/mock_backend.hpp"
#include "hind/parallel.hpp"
#include "hind/report.hpp"

#ifndef HIND_DEFAULT_PROMPTS_DIR
#define HIND_DEFAULT_PROMPTS_DIR "prompts"
#endif

namespace hind {

namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct RunConfig {
  ojson raw;  // config file snapshot for the manifest

  // dataset
  std::string dataset_type = "okvqa";
  std::string questions_file, annotations_file, aokvqa_file;
  Split split = Split::train;
  std::string image_template = "COCO_{split}2014_{image_id:012d}.jpg";

  std::string prompts_dir = HIND_DEFAULT_PROMPTS_DIR;
  std::string output_dir = "out";
  int jobs = 4;

  // backend
  std::string backend_kind = "mock";
  std::string fixtures_file;
  bool strict_mock = false;
  std::map<Role, RoleConfig> roles;

  long sampling_seed = 0;
  std::uint64_t knowledge_sft_seed = 0;
  std::uint64_t answer_sft_seed = 0;
  std::uint64_t kepo_seed = 0;

  int max_retries = 2;
  AnswerVariant answer_variant = AnswerVariant::cot_know;
  AnswerTargetKind answer_target = AnswerTargetKind::direct;

  int kepo_candidates = 10;
  double beta = 0.1;
  KepoLossForm loss_form = KepoLossForm::symmetric_beta;
  bool kepo_no_confidence = false;

  InferenceConfig infer;
  bool infer_mc = false;

  CorrectnessThreshold threshold = CorrectnessThreshold::any_match;
  std::string predictions_file;
  std::vector<int> sweep_k;
};

RunConfig load_config(const std::string& path) {
  RunConfig c;
  if (path.empty()) return c;
  ojson j = ojson::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("invalid JSON config: " + path);
  c.raw = j;

  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    c.dataset_type = d.value("type", c.dataset_type);
    c.questions_file = d.value("questions", "");
    c.annotations_file = d.value("annotations", "");
    c.aokvqa_file = d.value("file", "");
    if (d.contains("split")) c.split = split_from_name(d["split"].get<std::string>());
    c.image_template = d.value("image_template", c.image_template);
  }
  c.prompts_dir = j.value("prompts_dir", c.prompts_dir);
  c.output_dir = j.value("output_dir", c.output_dir);
  c.jobs = j.value("jobs", c.jobs);

  if (j.contains("backend")) {
    const auto& b = j["backend"];
    c.backend_kind = b.value("kind", c.backend_kind);
    c.fixtures_file = b.value("fixtures", "");
    c.strict_mock = b.value("strict", false);
    if (b.contains("roles")) {
      for (const auto& [name, rc] : b["roles"].items()) {
        RoleConfig role_config;
        role_config.role = role_from_name(name);
        role_config.endpoint = rc.value("endpoint", "");
        role_config.model_name = rc.value("model", "");
        role_config.auth_env = rc.value("auth_env", "");
        c.roles[role_config.role] = role_config;
      }
    }
  }
  if (j.contains("seeds")) {
    const auto& s = j["seeds"];
    c.sampling_seed = s.value("sampling", 0L);
    c.knowledge_sft_seed = s.value("knowledge_sft", 0ull);
    c.answer_sft_seed = s.value("answer_sft", 0ull);
    c.kepo_seed = s.value("kepo", 0ull);
  }
  if (j.contains("hindsight")) {
    const auto& h = j["hindsight"];
    c.max_retries = h.value("max_retries", c.max_retries);
    if (h.value("answer_variant", "cot_know") == "know_only") {
      c.answer_variant = AnswerVariant::know_only;
    }
    if (h.value("target", "direct") == "multiple_choice") {
      c.answer_target = AnswerTargetKind::multiple_choice;
    }
  }
  if (j.contains("kepo")) {
    const auto& k = j["kepo"];
    c.kepo_candidates = k.value("n_candidates", c.kepo_candidates);
    c.beta = k.value("beta", c.beta);
    if (k.value("loss_form", "symmetric_beta") == "paper_literal") {
      c.loss_form = KepoLossForm::paper_literal;
    }
    c.kepo_no_confidence = k.value("no_confidence", false);
  }
  if (j.contains("infer")) {
    const auto& i = j["infer"];
    c.infer.variant = variant_from_name(i.value("variant", "cot_know"));
    c.infer.k = i.value("k", c.infer.k);
    c.infer.sc_runs = i.value("sc_runs", c.infer.sc_runs);
    c.infer.cot_once = i.value("cot_once", false);
    c.infer_mc = i.value("multiple_choice", false);
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    if (e.contains("threshold")) {
      c.threshold = threshold_from_name(e["threshold"].get<std::string>());
    }
    c.predictions_file = e.value("predictions", "");
    if (e.contains("sweep")) c.sweep_k = e["sweep"].get<std::vector<int>>();
  }
  return c;
}

std::vector<Sample> load_dataset(const RunConfig& c) {
  if (c.dataset_type == "okvqa") {
    if (c.questions_file.empty() || c.annotations_file.empty()) {
      throw ConfigError("okvqa dataset needs questions and annotations paths");
    }
    return load_okvqa(c.questions_file, c.annotations_file, c.split, c.image_template);
  }
  if (c.dataset_type == "aokvqa") {
    if (c.aokvqa_file.empty()) throw ConfigError("aokvqa dataset needs a file path");
    return load_aokvqa(c.aokvqa_file, c.split);
  }
  throw ConfigError("unknown dataset type: " + c.dataset_type);
}

std::unique_ptr<Backend> make_backend(const RunConfig& c) {
  if (c.backend_kind == "mock") {
    auto mock = std::make_unique<MockBackend>();
    if (!c.fixtures_file.empty()) {
      *mock = MockBackend::from_file(c.fixtures_file);
    }
    mock->set_strict(c.strict_mock);
    return mock;
  }
  if (c.backend_kind == "http") {
    if (c.roles.empty()) throw ConfigError("http backend needs a roles map");
    return std::make_unique<HttpBackend>(c.roles);
  }
  throw ConfigError("unknown backend kind: " + c.backend_kind);
}

void write_jsonl(const fs::path& path, const std::vector<ojson>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += row.dump();
    out += '\n';
  }
  atomic_write_file(path, out);
}

// Config snapshot + seeds + input/output digests; no timestamps, so reruns
// on unchanged inputs produce identical bytes.
void write_manifest(const RunConfig& c, const std::string& command,
                    const std::vector<fs::path>& inputs,
                    const std::vector<fs::path>& outputs) {
  ojson manifest;
  manifest["command"] = command;
  manifest["config"] = c.raw;
  manifest["seeds"] = {{"sampling", c.sampling_seed},
                       {"knowledge_sft", c.knowledge_sft_seed},
                       {"answer_sft", c.answer_sft_seed},
                       {"kepo", c.kepo_seed}};
  ojson in_digests = ojson::object();
  for (const auto& p : inputs) {
    if (fs::exists(p)) in_digests[p.string()] = digest(read_file(p));
  }
  manifest["inputs"] = in_digests;
  ojson out_digests = ojson::object();
  for (const auto& p : outputs) {
    if (fs::exists(p)) out_digests[p.string()] = digest(read_file(p));
  }
  manifest["outputs"] = out_digests;
  atomic_write_file(fs::path(c.output_dir) / (command + ".manifest.json"),
                    manifest.dump(2) + "\n");
}

ojson sft_to_json(const SftRecord& r) {
  return ojson{{"id", r.sample_id},
               {"task", sft_task_name(r.task)},
               {"prompt", r.prompt},
               {"image", r.image_ref},
               {"target", r.target}};
}

ojson record_to_json(const HindsightZeroRecord& r) {
  return ojson{{"image_description", r.image_description},
               {"rationales", r.rationales},
               {"steps", r.steps},
               {"knowledge", r.knowledge},
               {"final_answer", r.final_answer}};
}

int cmd_build_hindsight(const RunConfig& c) {
  auto samples = load_dataset(c);
  auto templates = TemplateSet::load(c.prompts_dir);
  auto backend = make_backend(c);

  SamplingParams params = SamplingParams::knowledge_defaults();
  params.seed = c.sampling_seed;
  auto outcomes =
      build_hindsight_zero(samples, *backend, templates, params, c.max_retries, c.jobs);

  std::vector<ojson> outcome_rows, error_rows;
  for (const auto& o : outcomes) {
    ojson row{{"id", o.sample_id}, {"attempts", o.attempts}};
    std::vector<std::string> defects;
    for (Defect d : o.outcome.defects) defects.push_back(defect_name(d));
    row["defects"] = defects;
    row["record"] = o.outcome.record ? record_to_json(*o.outcome.record) : ojson(nullptr);
    if (o.backend_error) row["backend_error"] = *o.backend_error;
    outcome_rows.push_back(row);
    if (o.backend_error || o.outcome.fatal()) {
      error_rows.push_back(
          {{"id", o.sample_id},
           {"error", o.backend_error ? *o.backend_error : "unparseable response"}});
    }
  }

  auto [cot_records, cot_stats] = build_cot_sft(outcomes, samples, templates);
  auto [know_records, know_stats] =
      build_knowledge_sft(outcomes, samples, templates, c.knowledge_sft_seed);
  auto answer_records = build_answer_sft(outcomes, samples, templates, c.answer_sft_seed,
                                         c.answer_variant, c.answer_target);

  fs::path out(c.output_dir);
  auto to_rows = [](const std::vector<SftRecord>& recs) {
    std::vector<ojson> rows;
    rows.reserve(recs.size());
    for (const auto& r : recs) rows.push_back(sft_to_json(r));
    return rows;
  };
  write_jsonl(out / "hindsight_outcomes.jsonl", outcome_rows);
  write_jsonl(out / "cot_sft.jsonl", to_rows(cot_records));
  write_jsonl(out / "knowledge_sft.jsonl", to_rows(know_records));
  write_jsonl(out / "answer_sft.jsonl", to_rows(answer_records));
  write_jsonl(out / "errors.jsonl", error_rows);

  ojson stats{{"total", cot_stats.total},
              {"parsed_ok", cot_stats.parsed_ok},
              {"cot_kept", cot_stats.cot_kept},
              {"knowledge_kept", know_stats.knowledge_kept},
              {"answer_records", answer_records.size()},
              {"retries_used", cot_stats.retries_used}};
  atomic_write_file(out / "stats.json", stats.dump(2) + "\n");

  std::vector<fs::path> inputs{c.questions_file, c.annotations_file, c.aokvqa_file,
                               c.fixtures_file};
  write_manifest(c, "build-hindsight", inputs,
                 {out / "hindsight_outcomes.jsonl", out / "cot_sft.jsonl",
                  out / "knowledge_sft.jsonl", out / "answer_sft.jsonl", out / "stats.json"});
  std::cout << stats.dump() << "\n";
  return error_rows.empty() ? 0 : 1;
}

int cmd_build_kepo(const RunConfig& c) {
  auto samples = load_dataset(c);
  auto templates = TemplateSet::load(c.prompts_dir);
  auto backend = make_backend(c);

  SamplingParams params = SamplingParams::knowledge_defaults();

  struct SampleCandidates {
    std::vector<KnowledgeCandidate> candidates;
    std::vector<std::string> warnings;
  };
  std::vector<std::size_t> indices(samples.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  auto per_sample = parallel_map(
      indices,
      [&](std::size_t i) {
        SampleCandidates sc;
        long seed_base = c.sampling_seed + static_cast<long>(i) * c.kepo_candidates;
        sc.candidates = sample_candidates(samples[i], *backend, templates,
                                          c.kepo_candidates, params, seed_base, &sc.warnings);
        return sc;
      },
      c.jobs);

  std::map<std::string, std::vector<KnowledgeCandidate>> by_sample;
  std::vector<KnowledgeCandidate> all_candidates;
  std::vector<ojson> candidate_rows;
  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    by_sample[samples[i].sample_id] = per_sample[i].candidates;
    for (const auto& cand : per_sample[i].candidates) {
      all_candidates.push_back(cand);
      candidate_rows.push_back({{"id", cand.sample_id},
                                {"seed", cand.seed},
                                {"text", cand.text},
                                {"confidence", cand.confidence},
                                {"hit_count", cand.hit_count},
                                {"hit", cand.hit},
                                {"logprobs", cand.token_logprobs}});
    }
    for (const auto& w : per_sample[i].warnings) warnings.push_back(w);
  }

  auto rescorer = backend_rescorer(*backend);
  auto pairs = c.kepo_no_confidence
                   ? build_pairs_no_confidence(by_sample, samples, templates, c.kepo_seed,
                                               rescorer, &warnings)
                   : build_pairs(by_sample, samples, templates, c.kepo_seed, rescorer,
                                 &warnings);

  std::vector<ojson> pair_rows;
  for (const auto& p : pairs) {
    pair_rows.push_back({{"id", p.sample_id},
                         {"prompt", p.prompt},
                         {"image", p.image_ref},
                         {"chosen", p.chosen},
                         {"rejected", p.rejected},
                         {"chosen_confidence", p.chosen_confidence},
                         {"rejected_confidence", p.rejected_confidence},
                         {"provenance", provenance_name(p.provenance)}});
  }

  fs::path out(c.output_dir);
  write_jsonl(out / "kepo_pairs.jsonl", pair_rows);
  write_jsonl(out / "kepo_candidates.jsonl", candidate_rows);
  atomic_write_file(out / "confidence_hits.csv",
                    histogram_csv(confidence_hits_histogram(all_candidates)));
  std::vector<ojson> warning_rows;
  for (const auto& w : warnings) warning_rows.push_back({{"warning", w}});
  write_jsonl(out / "kepo_warnings.jsonl", warning_rows);

  write_manifest(c, "build-kepo",
                 {c.questions_file, c.annotations_file, c.aokvqa_file, c.fixtures_file},
                 {out / "kepo_pairs.jsonl", out / "kepo_candidates.jsonl",
                  out / "confidence_hits.csv"});
  std::cout << "pairs=" << pairs.size() << " candidates=" << all_candidates.size()
            << " beta=" << c.beta << "\n";
  return warnings.empty() ? 0 : 1;
}

int cmd_infer(const RunConfig& c) {
  auto samples = load_dataset(c);
  auto templates = TemplateSet::load(c.prompts_dir);
  auto backend = make_backend(c);

  InferenceConfig icfg = c.infer;
  icfg.knowledge_params.seed = c.sampling_seed;
  icfg.answer_params.seed = c.sampling_seed;
  icfg.cot_params.seed = c.sampling_seed;

  auto records = parallel_map(
      samples,
      [&](const Sample& sample) { return infer_sample(sample, *backend, templates, icfg); },
      c.jobs);

  std::vector<ojson> rows;
  int failures = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    ojson runs = ojson::array();
    for (const auto& run : rec.per_run) {
      ojson r{{"cot", run.cot ? ojson(*run.cot) : ojson(nullptr)},
              {"knowledge", run.knowledge},
              {"answer", run.raw_answer},
              {"ok", run.ok}};
      if (!run.ok) r["error"] = run.error;
      runs.push_back(r);
    }
    ojson row{{"id", rec.sample_id},
              {"answer", rec.final_answer},
              {"votes", rec.vote_counts},
              {"runs", runs}};
    if (c.infer_mc && samples[i].choices) {
      McResult mc = map_answer_to_choice(rec.final_answer, *samples[i].choices);
      row["choice"] = mc.predicted_choice;
      row["choice_stage"] = mc.mapping_stage;
    }
    if (rec.all_runs_failed) ++failures;
    rows.push_back(std::move(row));
  }

  fs::path out(c.output_dir);
  write_jsonl(out / "predictions.jsonl", rows);
  write_manifest(c, "infer",
                 {c.questions_file, c.annotations_file, c.aokvqa_file, c.fixtures_file},
                 {out / "predictions.jsonl"});
  std::cout << "predictions=" << rows.size() << " failed=" << failures << "\n";
  return failures == 0 ? 0 : 1;
}

int cmd_eval(const RunConfig& c) {
  auto samples = load_dataset(c);
  std::string predictions_path = c.predictions_file.empty()
                                     ? (fs::path(c.output_dir) / "predictions.jsonl").string()
                                     : c.predictions_file;
  if (!fs::exists(predictions_path)) {
    throw IoError("predictions file not found: " + predictions_path);
  }

  std::map<std::string, EvalInput> predictions;
  std::map<std::string, std::vector<std::string>> contexts;
  for (const auto& line : split_lines(read_file(predictions_path))) {
    if (trim(line).empty()) continue;
    ojson row = ojson::parse(line, nullptr, false);
    if (row.is_discarded()) throw SchemaError("invalid JSONL row in " + predictions_path);
    std::string id = row.at("id").get<std::string>();
    EvalInput input;
    input.answer = row.at("answer").get<std::string>();
    if (row.contains("choice")) input.predicted_choice = row["choice"].get<int>();
    predictions[id] = input;
    // Contexts: the first successful run's knowledge pieces, plus its CoT
    // when one was generated.
    std::vector<std::string> ctx;
    for (const auto& run : row.value("runs", ojson::array())) {
      if (!run.value("ok", false)) continue;
      for (const auto& k : run.value("knowledge", ojson::array())) {
        ctx.push_back(k.get<std::string>());
      }
      if (run.contains("cot") && !run["cot"].is_null()) {
        ctx.push_back(run["cot"].get<std::string>());
      }
      break;
    }
    contexts[id] = ctx;
  }

  EvalReport report = evaluate(predictions, samples, contexts, c.threshold);

  ojson report_json{{"n", report.n},
                    {"mean_vqa_score", report.mean_vqa_score},
                    {"prr_at_k", report.prr_at_k},
                    {"confusion",
                     {{"hit_correct", report.confusion[1][1]},
                      {"hit_wrong", report.confusion[1][0]},
                      {"miss_correct", report.confusion[0][1]},
                      {"miss_wrong", report.confusion[0][0]}}}};
  if (report.mc_accuracy) report_json["mc_accuracy"] = *report.mc_accuracy;
  ojson per_sample = ojson::array();
  for (const auto& row : report.per_sample) {
    ojson r{{"id", row.sample_id},
            {"vqa", row.vqa},
            {"context_hit", row.context_hit},
            {"correct", row.correct}};
    if (row.mc) r["mc"] = *row.mc;
    per_sample.push_back(r);
  }
  report_json["per_sample"] = per_sample;

  fs::path out(c.output_dir);
  atomic_write_file(out / "report.json", report_json.dump(2) + "\n");
  std::vector<fs::path> outputs{out / "report.json"};

  if (!c.sweep_k.empty()) {
    auto templates = TemplateSet::load(c.prompts_dir);
    auto backend = make_backend(c);
    SamplingParams kp = SamplingParams::knowledge_defaults();
    kp.seed = c.sampling_seed;
    SamplingParams ap = SamplingParams::answer_defaults();
    ap.seed = c.sampling_seed;
    auto rows = knowledge_shots_sweep(samples, *backend, templates, c.sweep_k, kp, ap, c.jobs);
    atomic_write_file(out / "sweep.csv", sweep_csv(rows));
    outputs.push_back(out / "sweep.csv");
  }

  write_manifest(c, "eval",
                 {predictions_path, c.questions_file, c.annotations_file, c.aokvqa_file},
                 outputs);
  std::cout << report_summary(report);
  return 0;
}

int cmd_stats(const RunConfig& c) {
  auto samples = load_dataset(c);
  int padded = 0, with_choices = 0;
  for (const auto& s : samples) {
    if (s.answers_padded) ++padded;
    if (s.choices) ++with_choices;
  }
  ojson stats{{"dataset", c.dataset_type},
              {"split", split_name(c.split)},
              {"samples", samples.size()},
              {"answers_padded", padded},
              {"with_choices", with_choices}};
  std::cout << stats.dump(2) << "\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"HinD pipeline: hindsight reasoning data, KEPO pairs, inference, evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON config file")->required();

  // Flag overrides; flags win over the config file.
  std::string output_dir, prompts_dir, variant, split, sweep_arg;
  int jobs = -1, k = -1, sc_runs = -1, n_candidates = -1, max_retries = -1;
  long seed = -1;
  double beta = -1.0;
  bool no_sc = false, no_confidence = false, mc = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->fallthrough();  // lets --config appear after the subcommand
    cmd->add_option("--output-dir", output_dir, "output directory override");
    cmd->add_option("--prompts-dir", prompts_dir, "prompt templates directory");
    cmd->add_option("--jobs", jobs, "max in-flight backend requests");
    cmd->add_option("--seed", seed, "sampling seed override");
    cmd->add_option("--split", split, "dataset split override");
  };

  auto* build_hindsight = app.add_subcommand("build-hindsight", "Hindsight-Zero + SFT sets");
  add_common(build_hindsight);
  build_hindsight->add_option("--max-retries", max_retries, "retry cap for fatal parses");

  auto* build_kepo = app.add_subcommand("build-kepo", "preference pairs from confidence");
  add_common(build_kepo);
  build_kepo->add_option("--candidates", n_candidates, "knowledge samples per item");
  build_kepo->add_option("--beta", beta, "KEPO beta (recorded in manifest)");
  build_kepo->add_flag("--ablation-no-confidence", no_confidence,
                       "random hit/miss pairing instead of confidence extremes");

  auto* infer = app.add_subcommand("infer", "answer generation with self-consistency");
  add_common(infer);
  infer->add_option("--variant", variant, "cot_know | know_only | cot_only");
  infer->add_option("--k", k, "knowledge pieces per run");
  infer->add_option("--sc-runs", sc_runs, "self-consistency runs");
  infer->add_flag("--no-sc", no_sc, "single run (sc_runs=1)");
  infer->add_flag("--mc", mc, "also map answers to multiple-choice indices");

  std::string predictions_path;
  auto* eval = app.add_subcommand("eval", "metrics, confusion matrix, sweep");
  add_common(eval);
  eval->add_option("--predictions", predictions_path, "predictions JSONL path");
  eval->add_option("--sweep", sweep_arg, "comma-separated k values");

  auto* stats = app.add_subcommand("stats", "dataset accounting");
  add_common(stats);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig c = load_config(config_path);
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (!prompts_dir.empty()) c.prompts_dir = prompts_dir;
    if (jobs > 0) c.jobs = jobs;
    if (seed >= 0) c.sampling_seed = seed;
    if (!split.empty()) c.split = split_from_name(split);
    if (max_retries >= 0) c.max_retries = max_retries;
    if (n_candidates > 0) c.kepo_candidates = n_candidates;
    if (beta > 0) c.beta = beta;
    if (no_confidence) c.kepo_no_confidence = true;
    if (!variant.empty() && infer->parsed()) c.infer.variant = variant_from_name(variant);
    if (k > 0) c.infer.k = k;
    if (sc_runs > 0) c.infer.sc_runs = sc_runs;
    if (no_sc) c.infer.sc_runs = 1;
    if (mc) c.infer_mc = true;
    if (!predictions_path.empty()) c.predictions_file = predictions_path;
    if (!sweep_arg.empty()) {
      c.sweep_k.clear();
      std::stringstream ss(sweep_arg);
      std::string item;
      while (std::getline(ss, item, ',')) c.sweep_k.push_back(std::stoi(item));
    }
    std::filesystem::create_directories(c.output_dir);

    if (build_hindsight->parsed()) return cmd_build_hindsight(c);
    if (build_kepo->parsed()) return cmd_build_kepo(c);
    if (infer->parsed()) return cmd_infer(c);
    if (eval->parsed()) return cmd_eval(c);
    if (stats->parsed()) return cmd_stats(c);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hind
