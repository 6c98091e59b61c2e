#include "hind/scoring.hpp"

#include <algorithm>
#include <cmath>

namespace hind {

double confidence(const std::vector<double>& token_logprobs) {
  if (token_logprobs.empty()) throw DomainError("confidence of empty logprob list");
  double sum = 0.0;
  for (double lp : token_logprobs) {
    if (lp > 0.0) throw DomainError("positive token logprob");
    if (!std::isfinite(lp)) throw DomainError("non-finite token logprob");
    sum += lp;
  }
  return std::exp(sum / static_cast<double>(token_logprobs.size()));
}

namespace {

int exact_match_count(const std::string& prediction, const std::vector<std::string>& answers,
                      int skip_index = -1) {
  std::string p = normalize(prediction);
  int count = 0;
  for (int i = 0; i < static_cast<int>(answers.size()); ++i) {
    if (i == skip_index) continue;
    if (normalize(answers[i]) == p) ++count;
  }
  return count;
}

}  // namespace

double vqa_score(const std::string& prediction, const std::vector<std::string>& answers) {
  if (answers.empty()) throw DomainError("vqa_score needs annotated answers");
  double count = exact_match_count(prediction, answers);
  return std::min(count / 3.0, 1.0);
}

double vqa_score_leave_one_out(const std::string& prediction,
                               const std::vector<std::string>& answers) {
  if (answers.empty()) throw DomainError("vqa_score needs annotated answers");
  double total = 0.0;
  for (int skip = 0; skip < static_cast<int>(answers.size()); ++skip) {
    double count = exact_match_count(prediction, answers, skip);
    total += std::min(count / 3.0, 1.0);
  }
  return total / static_cast<double>(answers.size());
}

bool prr_at_k(const std::vector<std::string>& contexts,
              const std::vector<std::string>& answers) {
  for (const auto& context : contexts) {
    if (contains_answer(context, answers) > 0) return true;
  }
  return false;
}

int mc_accuracy(int predicted_choice, int correct_choice) {
  if (predicted_choice < 0 || predicted_choice > 3 || correct_choice < 0 ||
      correct_choice > 3) {
    throw DomainError("choice index out of [0,3]");
  }
  return predicted_choice == correct_choice ? 1 : 0;
}

}  // namespace hind
