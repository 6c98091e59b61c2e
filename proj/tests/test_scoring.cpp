#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hind/scoring.hpp"
#include "hind/util.hpp"

using namespace hind;

namespace {
std::vector<std::string> ten_answers(std::initializer_list<std::string> firsts) {
  std::vector<std::string> a(firsts);
  while (a.size() < 10) a.push_back("filler_" + std::to_string(a.size()));
  return a;
}
}  // namespace

TEST_CASE("confidence matches closed forms") {
  CHECK(confidence({0.0}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(confidence({-std::log(2.0), -std::log(2.0)}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(confidence({-1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("confidence matches a long-double independent recomputation") {
  DetRng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng.below(12);
    std::vector<double> lps;
    long double sum = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
      double lp = -8.0 * rng.unit();
      lps.push_back(lp);
      sum += static_cast<long double>(lp);
    }
    double expected = static_cast<double>(std::exp(sum / static_cast<long double>(n)));
    double got = confidence(lps);
    CHECK(std::fabs(got - expected) <= 1e-12);
    CHECK(got > 0.0);
    CHECK(got <= 1.0);

    // Permutation invariance.
    std::vector<double> shuffled = lps;
    DetRng shuffle_rng(trial);
    det_shuffle(shuffled, shuffle_rng);
    CHECK(confidence(shuffled) == doctest::Approx(got).epsilon(1e-12));

    // Strictly increasing in each coordinate.
    if (lps[0] < -1e-6) {
      std::vector<double> bumped = lps;
      bumped[0] += 1e-6;
      CHECK(confidence(bumped) > got);
    }
  }
}

TEST_CASE("confidence domain errors") {
  CHECK_THROWS_AS(confidence({}), DomainError);
  CHECK_THROWS_AS(confidence({-0.5, 0.1}), DomainError);
  CHECK_THROWS_AS(confidence({std::nan("")}), DomainError);
}

TEST_CASE("vqa_score is exact-match soft accuracy") {
  auto answers = ten_answers({"cat", "cat", "cat", "dog"});
  CHECK(vqa_score("cat", answers) == doctest::Approx(1.0));        // 3 matches saturate
  CHECK(vqa_score("dog", answers) == doctest::Approx(1.0 / 3.0));  // 1 match
  CHECK(vqa_score("bird", answers) == doctest::Approx(0.0));
  // Normalization applies: "The Cat!" == "cat".
  CHECK(vqa_score("The Cat!", answers) == doctest::Approx(1.0));
  // Exact equality, not substring: "cats" does not match "cat".
  CHECK(vqa_score("cats", answers) == doctest::Approx(0.0));
  // Saturation: 4+ matches still 1.0.
  CHECK(vqa_score("cat", ten_answers({"cat", "cat", "cat", "cat", "cat"})) ==
        doctest::Approx(1.0));
}

TEST_CASE("vqa_score monotone in match count") {
  for (int matches = 0; matches <= 10; ++matches) {
    std::vector<std::string> answers;
    for (int i = 0; i < 10; ++i)
      answers.push_back(i < matches ? "yes" : "no_" + std::to_string(i));
    double expected = std::min(matches / 3.0, 1.0);
    CHECK(vqa_score("yes", answers) == doctest::Approx(expected));
  }
}

TEST_CASE("vqa_score_leave_one_out matches a brute-force oracle") {
  DetRng rng(55);
  const char* vocab[] = {"cat", "dog", "bird", "fish"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> answers;
    for (int i = 0; i < 10; ++i) answers.push_back(vocab[rng.below(4)]);
    std::string pred = vocab[rng.below(4)];
    // Oracle: average over the 10 subsets that omit one annotator.
    double total = 0.0;
    for (int omit = 0; omit < 10; ++omit) {
      int matches = 0;
      for (int i = 0; i < 10; ++i)
        if (i != omit && answers[i] == pred) ++matches;
      total += std::min(matches / 3.0, 1.0);
    }
    CHECK(vqa_score_leave_one_out(pred, answers) == doctest::Approx(total / 10.0));
    // Leave-one-out never exceeds the plain score.
    CHECK(vqa_score_leave_one_out(pred, answers) <= vqa_score(pred, answers) + 1e-12);
  }
}

TEST_CASE("prr_at_k basics") {
  auto answers = ten_answers({"ponytail"});
  CHECK(prr_at_k({"ponytails are common hairstyle for tennis players"}, answers));
  CHECK_FALSE(prr_at_k({"", ""}, answers));
  CHECK_FALSE(prr_at_k({}, answers));
  CHECK(prr_at_k({"nothing here", "a ponytail keeps hair back"}, answers));
}

TEST_CASE("prr_at_k is monotone under context inclusion") {
  DetRng rng(808);
  auto word = [&rng] {
    std::string s;
    for (int j = 0; j < 3; ++j) s.push_back(static_cast<char>('b' + rng.below(4)));
    return s;
  };
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> answers;
    for (int i = 0; i < 10; ++i) answers.push_back(word());
    std::vector<std::string> contexts;
    std::size_t n = 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) contexts.push_back(word() + " " + word());
    bool small = prr_at_k(contexts, answers);
    std::vector<std::string> larger = contexts;
    larger.push_back(word());
    if (small) CHECK(prr_at_k(larger, answers));
    if (!prr_at_k(larger, answers)) CHECK_FALSE(small);
  }
}

TEST_CASE("mc_accuracy") {
  CHECK(mc_accuracy(2, 2) == 1);
  CHECK(mc_accuracy(0, 3) == 0);
  CHECK_THROWS_AS(mc_accuracy(-1, 0), DomainError);
  CHECK_THROWS_AS(mc_accuracy(0, 4), DomainError);

  // Hand-counted fixture of 20 prediction/correct pairs: 14 agree.
  int preds[20] = {0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3};
  int gold[20] = {0, 1, 2, 3, 0, 1, 2, 3, 0, 1, 2, 3, 0, 0, 0, 0, 1, 2, 3, 3};
  int total = 0;
  for (int i = 0; i < 20; ++i) total += mc_accuracy(preds[i], gold[i]);
  CHECK(total == 14);
}
