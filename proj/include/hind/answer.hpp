#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hind/backend.hpp"
#include "hind/dataset.hpp"
#include "hind/prompting.hpp"

namespace hind {

enum class InferenceVariant { cot_know, know_only, cot_only };

std::string variant_name(InferenceVariant v);
InferenceVariant variant_from_name(const std::string& name);

struct InferenceConfig {
  InferenceVariant variant = InferenceVariant::cot_know;
  int k = 5;        // |K^| knowledge pieces per run
  int sc_runs = 5;  // self-consistency runs
  SamplingParams knowledge_params = SamplingParams::knowledge_defaults();
  SamplingParams answer_params = SamplingParams::answer_defaults();
  SamplingParams cot_params = SamplingParams::answer_defaults();
  // Generate the CoT once (run 0) and reuse it, instead of resampling per run.
  bool cot_once = false;
};

struct RunTrace {
  std::optional<std::string> cot;
  std::vector<std::string> knowledge;
  std::string raw_answer;
  bool ok = false;
  std::string error;
};

struct PredictionRecord {
  std::string sample_id;
  std::vector<RunTrace> per_run;  // length = sc_runs
  std::string final_answer;       // most frequent raw surface of the winning vote
  std::map<std::string, int> vote_counts;
  bool all_runs_failed = false;
};

// One sample through the inference pipeline: per run, regenerate the context
// (CoT when the variant includes it; k knowledge samples with seeds
// base + r*k .. base + r*k + k-1), render the matching answer prompt, answer
// at low temperature, then majority-vote over normalized answers.
PredictionRecord infer_sample(const Sample& sample, Backend& backend,
                              const TemplateSet& templates, const InferenceConfig& config);

// Argmax of normalized-answer counts; ties broken by earliest first
// occurrence in run order. Returns the normalized winner.
std::string majority_vote(const std::vector<std::string>& answers);

struct McResult {
  int predicted_choice = 0;
  // exact | containment | token_overlap | fallback -- which cascade stage fired
  std::string mapping_stage;
};

// Answer prompt carries the four labeled options; the generated answer is
// mapped to a choice by exact normalized match, then containment overlap,
// then normalized-token overlap, else choice 0 with a flag.
McResult infer_multiple_choice(const Sample& sample, Backend& backend,
                               const TemplateSet& templates, const InferenceConfig& config);

// Mapping cascade alone, for tests and offline remapping.
McResult map_answer_to_choice(const std::string& answer,
                              const std::vector<std::string>& choices);

}  // namespace hind
