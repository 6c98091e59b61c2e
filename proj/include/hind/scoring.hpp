#pragma once

#include <string>
#include <vector>

#include "hind/dataset.hpp"

namespace hind {

// One sampled knowledge string with its generation-time likelihood and how
// often it mentions an annotated answer.
struct KnowledgeCandidate {
  std::string sample_id;
  std::string text;
  std::vector<double> token_logprobs;
  double confidence = 0.0;  // exp(mean(token_logprobs)), in (0, 1]
  int hit_count = 0;
  bool hit = false;  // hit_count > 0
  long seed = 0;     // sampling seed; the tie-break ordering for pair selection
};

// Length-normalized sequence likelihood exp(mean(logprobs)); the inverse of
// per-token perplexity. List must be non-empty with all entries <= 0.
double confidence(const std::vector<double>& token_logprobs);

// Soft accuracy min(matches/3, 1) where matches counts annotated answers
// whose normalized form EQUALS the normalized prediction (exact match, not
// substring: scoring compares an answer to an answer).
double vqa_score(const std::string& prediction, const std::vector<std::string>& answers);

// Official-style leave-one-out averaging over the 10 annotator subsets of
// size 9; available behind a flag for cross-checking.
double vqa_score_leave_one_out(const std::string& prediction,
                               const std::vector<std::string>& answers);

// True iff any context mentions any annotated answer (substring containment
// after normalization). Monotone under context-set inclusion.
bool prr_at_k(const std::vector<std::string>& contexts,
              const std::vector<std::string>& answers);

// Indicator of choice equality; both arguments in [0, 3].
int mc_accuracy(int predicted_choice, int correct_choice);

}  // namespace hind
