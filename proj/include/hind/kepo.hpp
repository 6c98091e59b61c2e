#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hind/backend.hpp"
#include "hind/dataset.hpp"
#include "hind/prompting.hpp"
#include "hind/scoring.hpp"

namespace hind {

enum class PairProvenance { native, cross_sample_negative };

std::string provenance_name(PairProvenance p);

struct PreferencePair {
  std::string sample_id;
  std::string prompt;
  std::string image_ref;
  std::string chosen;
  std::string rejected;
  double chosen_confidence = 0.0;
  double rejected_confidence = 0.0;
  PairProvenance provenance = PairProvenance::native;
};

// n generations from the HDFT knowledge policy with seeds
// seed_base..seed_base+n-1, each carrying confidence from its own sampling
// logprobs and a hit count against the sample's annotations. Candidates whose
// generation failed or returned no tokens are dropped with a warning entry.
std::vector<KnowledgeCandidate> sample_candidates(const Sample& sample, Backend& backend,
                                                  const TemplateSet& templates, int n,
                                                  const SamplingParams& params,
                                                  long seed_base,
                                                  std::vector<std::string>* warnings = nullptr);

// Confidence of a cross-sample negative under the target sample's prompt;
// maps (prompt, text) to exp(mean(score logprobs)).
using Rescorer = std::function<double(const std::string& prompt, const std::string& text)>;

Rescorer backend_rescorer(Backend& backend, Role role = Role::knowledge_generator_hdft);

// Per-sample pair rule: mixed hit/miss -> extreme pair (min-confidence hit,
// max-confidence miss; ties by earliest sampling seed) plus one random
// (hit, miss) pair deduped against the extreme; only hits -> one pair with a
// uniformly drawn candidate from another sample as the rejected side,
// rescored under this sample's prompt; only misses or nothing -> no pairs.
std::vector<PreferencePair> build_pairs(
    const std::map<std::string, std::vector<KnowledgeCandidate>>& candidates_by_sample,
    const std::vector<Sample>& samples, const TemplateSet& templates, std::uint64_t rng_seed,
    const Rescorer& rescorer, std::vector<std::string>* warnings = nullptr);

// Ablation: extreme-pair selection replaced by uniform draws from hit x miss;
// the cross-sample rule for only-hit samples is unchanged.
std::vector<PreferencePair> build_pairs_no_confidence(
    const std::map<std::string, std::vector<KnowledgeCandidate>>& candidates_by_sample,
    const std::vector<Sample>& samples, const TemplateSet& templates, std::uint64_t rng_seed,
    const Rescorer& rescorer, std::vector<std::string>* warnings = nullptr);

enum class KepoLossForm {
  // Standard DPO shape: beta scales both log-ratios. The default.
  symmetric_beta,
  // Literal printed equation: beta scales only the chosen log-ratio.
  paper_literal,
};

struct KepoLossInput {
  double policy_logprob_chosen = 0.0;
  double policy_logprob_rejected = 0.0;
  double ref_logprob_chosen = 0.0;
  double ref_logprob_rejected = 0.0;
  double beta = 0.1;
  KepoLossForm form = KepoLossForm::symmetric_beta;
};

// -log sigma(.) of the preference margin; >= 0, = ln 2 at zero log-ratios.
double kepo_loss(const KepoLossInput& input);

struct KepoLossGrad {
  double d_policy_chosen = 0.0;
  double d_policy_rejected = 0.0;
  double d_ref_chosen = 0.0;
  double d_ref_rejected = 0.0;
};

// Analytic gradient w.r.t. the four sequence logprobs.
KepoLossGrad kepo_loss_grad(const KepoLossInput& input);

}  // namespace hind
