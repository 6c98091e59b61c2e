#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hind/answer.hpp"
#include "hind/backend.hpp"
#include "hind/dataset.hpp"
#include "hind/scoring.hpp"

namespace hind {

// When a prediction counts as correct for the confusion matrix.
enum class CorrectnessThreshold {
  any_match,     // vqa_score > 0 (default)
  one_third,     // vqa_score >= 1/3
  full,          // vqa_score == 1
};

CorrectnessThreshold threshold_from_name(const std::string& name);

struct EvalInput {
  std::string answer;
  std::optional<int> predicted_choice;
};

struct PerSampleRow {
  std::string sample_id;
  double vqa = 0.0;
  bool context_hit = false;
  bool correct = false;
  std::optional<int> mc = {};  // 0/1 when choices present
};

struct EvalReport {
  int n = 0;
  double mean_vqa_score = 0.0;
  double prr_at_k = 0.0;
  std::optional<double> mc_accuracy = {};
  // [context_hit][prediction_correct] counts; cells sum to n.
  std::array<std::array<int, 2>, 2> confusion = {};
  std::vector<PerSampleRow> per_sample;
};

// Pure fold over (prediction, sample, contexts) triplets keyed by sample_id.
// Throws on a key mismatch, naming the missing ids.
EvalReport evaluate(const std::map<std::string, EvalInput>& predictions,
                    const std::vector<Sample>& samples,
                    const std::map<std::string, std::vector<std::string>>& contexts,
                    CorrectnessThreshold threshold = CorrectnessThreshold::any_match);

struct ConfHitsHistogram {
  int bin_count = 20;  // uniform bins over [0, 1]
  struct Row {
    int hits = 0;  // 0..10
    int bin = 0;
    int count = 0;
  };
  std::vector<Row> rows;  // sparse, sorted by (hits, bin)
  int total = 0;
};

ConfHitsHistogram confidence_hits_histogram(const std::vector<KnowledgeCandidate>& candidates,
                                            int bin_count = 20);

std::string histogram_csv(const ConfHitsHistogram& histogram);

struct SweepRow {
  int k = 0;
  double prr = 0.0;
  double score = 0.0;
};

// Knowledge-shots sweep over the know-only pipeline. A shared pool of
// max(k_values) knowledge samples per sample is drawn once; smaller k uses
// prefixes, so PRR@K is monotone in k by construction.
std::vector<SweepRow> knowledge_shots_sweep(const std::vector<Sample>& samples,
                                            Backend& backend, const TemplateSet& templates,
                                            const std::vector<int>& k_values,
                                            const SamplingParams& knowledge_params,
                                            const SamplingParams& answer_params,
                                            int max_in_flight = 4);

std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string report_summary(const EvalReport& report);

}  // namespace hind
