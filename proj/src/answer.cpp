#include "hind/answer.hpp"

#include <algorithm>
#include <sstream>

namespace hind {

std::string variant_name(InferenceVariant v) {
  switch (v) {
    case InferenceVariant::cot_know: return "cot_know";
    case InferenceVariant::know_only: return "know_only";
    case InferenceVariant::cot_only: return "cot_only";
  }
  return "?";
}

InferenceVariant variant_from_name(const std::string& name) {
  for (auto v : {InferenceVariant::cot_know, InferenceVariant::know_only,
                 InferenceVariant::cot_only}) {
    if (variant_name(v) == name) return v;
  }
  throw ConfigError("unknown inference variant: " + name);
}

namespace {

bool wants_cot(InferenceVariant v) { return v != InferenceVariant::know_only; }
bool wants_knowledge(InferenceVariant v) { return v != InferenceVariant::cot_only; }

std::string build_answer_prompt(const TemplateSet& templates, const Sample& sample,
                                const RunTrace& run, InferenceVariant variant) {
  Bindings b{{"question", sample.question},
             {"knowledge", format_knowledge_block(run.knowledge)}};
  if (wants_cot(variant)) {
    b["cot_process"] = run.cot.value_or("");
    return templates.render(TemplateId::answer_cot_know, b);
  }
  return templates.render(TemplateId::answer_know, b);
}

}  // namespace

PredictionRecord infer_sample(const Sample& sample, Backend& backend,
                              const TemplateSet& templates, const InferenceConfig& config) {
  PredictionRecord record;
  record.sample_id = sample.sample_id;

  std::string cot_prompt = wants_cot(config.variant)
                               ? templates.render(TemplateId::cot_gen,
                                                  {{"question", sample.question}})
                               : std::string();
  std::string know_prompt = wants_knowledge(config.variant)
                                ? templates.render(TemplateId::know_gen,
                                                   {{"question", sample.question}})
                                : std::string();

  std::optional<std::string> shared_cot;
  for (int r = 0; r < config.sc_runs; ++r) {
    RunTrace run;
    try {
      if (wants_cot(config.variant)) {
        if (config.cot_once && shared_cot) {
          run.cot = shared_cot;
        } else {
          SamplingParams p = config.cot_params;
          p.seed = config.cot_params.seed + r;
          run.cot = backend.generate(Role::cot_generator, cot_prompt, sample.image_ref, p).text;
          if (config.cot_once) shared_cot = run.cot;
        }
      }
      if (wants_knowledge(config.variant)) {
        for (int i = 0; i < config.k; ++i) {
          SamplingParams p = config.knowledge_params;
          p.seed = config.knowledge_params.seed + static_cast<long>(r) * config.k + i;
          run.knowledge.push_back(
              backend.generate(Role::knowledge_generator_kepo, know_prompt, sample.image_ref, p)
                  .text);
        }
      }
      std::string prompt = build_answer_prompt(templates, sample, run, config.variant);
      SamplingParams p = config.answer_params;
      p.seed = config.answer_params.seed + r;
      run.raw_answer =
          backend.generate(Role::answer_generator, prompt, sample.image_ref, p).text;
      run.ok = true;
    } catch (const BackendError& e) {
      run.ok = false;
      run.error = e.what();
    }
    record.per_run.push_back(std::move(run));
  }

  // Vote on normalized answers; report the most frequent raw surface form of
  // the winning group so predictions stay readable. Ties resolve to the
  // earliest run (runs are aggregated in seed order).
  std::map<std::string, int> norm_counts;
  std::vector<std::string> norm_order;
  for (const auto& run : record.per_run) {
    if (!run.ok) continue;
    std::string n = normalize(run.raw_answer);
    if (norm_counts[n]++ == 0) norm_order.push_back(n);
  }
  if (norm_counts.empty()) {
    record.all_runs_failed = true;
    return record;
  }
  std::string winner_norm;
  int winner_count = 0;
  for (const auto& n : norm_order) {
    if (norm_counts[n] > winner_count) {
      winner_norm = n;
      winner_count = norm_counts[n];
    }
  }
  // Most frequent raw surface within the winning group, earliest run on ties.
  std::map<std::string, int> raw_counts;
  std::vector<std::string> raw_order;
  for (const auto& run : record.per_run) {
    if (!run.ok || normalize(run.raw_answer) != winner_norm) continue;
    if (raw_counts[run.raw_answer]++ == 0) raw_order.push_back(run.raw_answer);
  }
  std::string winner_raw;
  int raw_best = 0;
  for (const auto& raw : raw_order) {
    if (raw_counts[raw] > raw_best) {
      winner_raw = raw;
      raw_best = raw_counts[raw];
    }
  }
  record.final_answer = winner_raw;
  // vote_counts keyed by each group's raw representative.
  for (const auto& n : norm_order) {
    std::string rep;
    for (const auto& run : record.per_run) {
      if (run.ok && normalize(run.raw_answer) == n) {
        rep = run.raw_answer;
        break;
      }
    }
    if (n == winner_norm) rep = winner_raw;
    record.vote_counts[rep] = norm_counts[n];
  }
  return record;
}

std::string majority_vote(const std::vector<std::string>& answers) {
  if (answers.empty()) throw DomainError("majority_vote of empty list");
  std::map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto& a : answers) {
    std::string n = normalize(a);
    if (counts[n]++ == 0) order.push_back(n);
  }
  std::string winner = order.front();
  for (const auto& n : order) {
    if (counts[n] > counts[winner]) winner = n;
  }
  return winner;
}

namespace {

std::vector<std::string> normalized_tokens(const std::string& text) {
  std::istringstream in(normalize(text));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

}  // namespace

McResult map_answer_to_choice(const std::string& answer,
                              const std::vector<std::string>& choices) {
  std::string norm_answer = normalize(answer);

  for (std::size_t i = 0; i < choices.size(); ++i) {
    if (normalize(choices[i]) == norm_answer) {
      return {static_cast<int>(i), "exact"};
    }
  }

  // Containment: how often the choice appears inside the generated text.
  int best_idx = -1, best_overlap = 0;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    int overlap = contains_answer(answer, {choices[i]});
    // Also credit the symmetric direction (answer inside choice text).
    overlap += contains_answer(choices[i], {answer});
    if (overlap > best_overlap) {
      best_overlap = overlap;
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx >= 0) return {best_idx, "containment"};

  // Token overlap, normalized by choice length.
  auto answer_tokens = normalized_tokens(answer);
  double best_score = 0.0;
  best_idx = -1;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    auto choice_tokens = normalized_tokens(choices[i]);
    if (choice_tokens.empty()) continue;
    int shared = 0;
    for (const auto& t : choice_tokens) {
      if (std::find(answer_tokens.begin(), answer_tokens.end(), t) != answer_tokens.end()) {
        ++shared;
      }
    }
    double score = static_cast<double>(shared) / static_cast<double>(choice_tokens.size());
    if (score > best_score) {
      best_score = score;
      best_idx = static_cast<int>(i);
    }
  }
  if (best_idx >= 0 && best_score > 0.0) return {best_idx, "token_overlap"};

  return {0, "fallback"};
}

McResult infer_multiple_choice(const Sample& sample, Backend& backend,
                               const TemplateSet& templates, const InferenceConfig& config) {
  if (!sample.choices) throw DomainError("sample has no choices: " + sample.sample_id);
  // Label the options inside the question slot so every answer-prompt variant
  // carries them.
  std::string labeled = sample.question + "\nOptions:";
  const char* labels[] = {"(A)", "(B)", "(C)", "(D)"};
  for (std::size_t i = 0; i < sample.choices->size() && i < 4; ++i) {
    labeled += std::string("\n") + labels[i] + " " + (*sample.choices)[i];
  }
  Sample labeled_sample = sample;
  labeled_sample.question = labeled;
  PredictionRecord pred = infer_sample(labeled_sample, backend, templates, config);
  if (pred.all_runs_failed) {
    throw BackendError("all inference runs failed for sample " + sample.sample_id);
  }
  return map_answer_to_choice(pred.final_answer, *sample.choices);
}

}  // namespace hind
