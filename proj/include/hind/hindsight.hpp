#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hind/backend.hpp"
#include "hind/dataset.hpp"
#include "hind/parsing.hpp"
#include "hind/prompting.hpp"

namespace hind {

enum class SftTask { cot, knowledge, answer };

std::string sft_task_name(SftTask t);

struct SftRecord {
  std::string sample_id;
  SftTask task = SftTask::cot;
  std::string prompt;
  std::string image_ref;
  std::string target;
};

struct BuildStats {
  int total = 0;
  int parsed_ok = 0;
  int cot_kept = 0;
  int knowledge_kept = 0;
  int retries_used = 0;
};

struct HindsightOutcome {
  std::string sample_id;
  ParseOutcome outcome;
  int attempts = 0;
  std::optional<std::string> backend_error;
};

// Renders the hindsight prompt (question + canonical ground-truth answer) per
// sample, calls the hindsight_zero role, parses; retries with incremented
// seed while the parse is fatal, up to max_retries extra attempts. Backend
// errors land in the per-sample outcome instead of aborting the batch.
// Output order follows the input sample order.
std::vector<HindsightOutcome> build_hindsight_zero(const std::vector<Sample>& samples,
                                                   Backend& backend,
                                                   const TemplateSet& templates,
                                                   const SamplingParams& params,
                                                   int max_retries, int max_in_flight = 4);

// Keeps a CoT record iff the trajectory (CoT text + its final answer)
// mentions a ground-truth answer. Target is the CoT text; the final-answer
// line is not part of the target, so the audit trail needs the outcomes.
std::pair<std::vector<SftRecord>, BuildStats> build_cot_sft(
    const std::vector<HindsightOutcome>& outcomes, const std::vector<Sample>& samples,
    const TemplateSet& templates);

// Per sample: partition knowledge by hit; draw one hit piece uniformly
// (seeded per sample, order-independent); skip samples with no hits.
std::pair<std::vector<SftRecord>, BuildStats> build_knowledge_sft(
    const std::vector<HindsightOutcome>& outcomes, const std::vector<Sample>& samples,
    const TemplateSet& templates, std::uint64_t rng_seed);

enum class AnswerVariant { cot_know, know_only };
enum class AnswerTargetKind { direct, multiple_choice };

// One record per sample, imperfect parses included: whatever sections parsed
// feed the prompt, knowledge shuffled per-sample (seeded), target is the
// canonical ground-truth answer (or the correct choice text for MC).
std::vector<SftRecord> build_answer_sft(const std::vector<HindsightOutcome>& outcomes,
                                        const std::vector<Sample>& samples,
                                        const TemplateSet& templates, std::uint64_t rng_seed,
                                        AnswerVariant variant = AnswerVariant::cot_know,
                                        AnswerTargetKind target_kind =
                                            AnswerTargetKind::direct);

}  // namespace hind
