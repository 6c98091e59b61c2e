#include <doctest.h>

#include <string>
#include <vector>

#include "hind/answer.hpp"
#include "hind/mock_backend.hpp"

using namespace hind;

namespace {

const TemplateSet& templates() {
  static TemplateSet set = TemplateSet::load(HIND_PROMPTS_DIR);
  return set;
}

Sample make_sample(const std::string& id, const std::string& question,
                   const std::string& answer) {
  Sample s;
  s.sample_id = id;
  s.image_ref = "img_" + id + ".jpg";
  s.question = question;
  s.answers.assign(10, answer);
  return s;
}

// Strict-mode fixture rig for know_only inference with k=1: every prompt in
// the chain is computable, so each run's answer is fully scripted.
struct ScriptedInference {
  Sample sample = make_sample("s", "What did the batter hit?", "home run");
  MockBackend backend;
  InferenceConfig config;

  explicit ScriptedInference(const std::vector<std::string>& run_answers) {
    config.variant = InferenceVariant::know_only;
    config.k = 1;
    config.sc_runs = static_cast<int>(run_answers.size());
    backend.set_strict(true);
    std::string know_prompt =
        templates().render(TemplateId::know_gen, {{"question", sample.question}});
    for (std::size_t r = 0; r < run_answers.size(); ++r) {
      std::string knowledge = "knowledge piece " + std::to_string(r);
      long know_seed = config.knowledge_params.seed + static_cast<long>(r) * config.k;
      backend.add_fixture(Role::knowledge_generator_kepo, know_prompt, know_seed,
                          {knowledge, std::nullopt});
      std::string answer_prompt =
          templates().render_answer_prompt(sample.question, std::nullopt, {knowledge});
      long answer_seed = config.answer_params.seed + static_cast<long>(r);
      if (!run_answers[r].empty()) {
        backend.add_fixture(Role::answer_generator, answer_prompt, answer_seed,
                            {run_answers[r], std::nullopt});
      }
      // An empty entry leaves the answer fixture out: that run fails.
    }
  }

  PredictionRecord run() { return infer_sample(sample, backend, templates(), config); }
};

}  // namespace

TEST_CASE("majority_vote normalizes and counts") {
  CHECK(majority_vote({"Home run", "home run", "strike", "home-run", "strike"}) == "home run");
  CHECK(majority_vote({"cat"}) == "cat");
  // Tie: earliest first occurrence wins.
  CHECK(majority_vote({"dog", "cat", "cat", "dog"}) == "dog");
  CHECK(majority_vote({"The Cat!", "cat"}) == "cat");
  CHECK_THROWS_AS(majority_vote({}), DomainError);
}

TEST_CASE("self-consistency vote over scripted runs") {
  ScriptedInference rig({"Home run", "home run", "strike", "home-run", "strike"});
  PredictionRecord pred = rig.run();
  REQUIRE(pred.per_run.size() == 5);
  for (const auto& run : pred.per_run) {
    CHECK(run.ok);
    CHECK(run.knowledge.size() == 1);
    CHECK_FALSE(run.cot.has_value());  // know_only never generates a CoT
  }
  // "home run" group (3 votes, surfaces tie -> earliest run's raw form) beats
  // "strike" (2 votes).
  CHECK(pred.final_answer == "Home run");
  CHECK_FALSE(pred.all_runs_failed);
  REQUIRE(pred.vote_counts.size() == 2);
  CHECK(pred.vote_counts.at("Home run") == 3);
  CHECK(pred.vote_counts.at("strike") == 2);
}

TEST_CASE("failed runs drop out of the vote") {
  // Runs 0 and 2 have no answer fixture -> BackendError inside the run.
  ScriptedInference rig({"", "strike", "", "home run", "home run"});
  PredictionRecord pred = rig.run();
  REQUIRE(pred.per_run.size() == 5);
  CHECK_FALSE(pred.per_run[0].ok);
  CHECK_FALSE(pred.per_run[0].error.empty());
  CHECK(pred.per_run[1].ok);
  CHECK(pred.final_answer == "home run");
  CHECK(pred.vote_counts.at("home run") == 2);
  CHECK(pred.vote_counts.at("strike") == 1);
}

TEST_CASE("all runs failing is flagged, not thrown") {
  ScriptedInference rig({"", "", ""});
  PredictionRecord pred = rig.run();
  CHECK(pred.all_runs_failed);
  CHECK(pred.final_answer.empty());
  CHECK(pred.vote_counts.empty());
}

TEST_CASE("inference is deterministic against the mock backend") {
  Sample s = make_sample("d", "What instrument has keys?", "piano");
  MockBackend backend;
  InferenceConfig config;  // cot_know defaults: k=5, sc_runs=5
  auto p1 = infer_sample(s, backend, templates(), config);
  auto p2 = infer_sample(s, backend, templates(), config);
  REQUIRE(p1.per_run.size() == 5);
  CHECK(p1.final_answer == p2.final_answer);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(p1.per_run[r].raw_answer == p2.per_run[r].raw_answer);
    CHECK(p1.per_run[r].knowledge == p2.per_run[r].knowledge);
    CHECK(p1.per_run[r].cot == p2.per_run[r].cot);
    CHECK(p1.per_run[r].knowledge.size() == 5);
    CHECK(p1.per_run[r].cot.has_value());
  }
  // Each run draws fresh knowledge seeds, so contexts vary across runs.
  CHECK(p1.per_run[0].knowledge != p1.per_run[1].knowledge);
}

TEST_CASE("cot_only variant skips knowledge sampling") {
  Sample s = make_sample("c", "Why is the sky blue?", "rayleigh");
  MockBackend backend;
  InferenceConfig config;
  config.variant = InferenceVariant::cot_only;
  config.sc_runs = 2;
  auto pred = infer_sample(s, backend, templates(), config);
  for (const auto& run : pred.per_run) {
    CHECK(run.knowledge.empty());
    CHECK(run.cot.has_value());
    CHECK(run.ok);
  }
}

TEST_CASE("cot_once reuses the first run's CoT") {
  Sample s = make_sample("c", "Why?", "because");
  MockBackend backend;
  backend.set_strict(true);
  InferenceConfig config;
  config.variant = InferenceVariant::cot_only;
  config.sc_runs = 3;
  config.cot_once = true;
  std::string cot_prompt = templates().render(TemplateId::cot_gen, {{"question", s.question}});
  // Only the run-0 CoT seed has a fixture; cot_once must never ask for more.
  backend.add_fixture(Role::cot_generator, cot_prompt, config.cot_params.seed,
                      {"shared reasoning", std::nullopt});
  for (int r = 0; r < 3; ++r) {
    std::string answer_prompt =
        templates().render_answer_prompt(s.question, std::string("shared reasoning"), {});
    backend.add_fixture(Role::answer_generator, answer_prompt, config.answer_params.seed + r,
                        {"because", std::nullopt});
  }
  auto pred = infer_sample(s, backend, templates(), config);
  for (const auto& run : pred.per_run) {
    CHECK(run.ok);
    CHECK(run.cot == "shared reasoning");
  }
  CHECK(pred.final_answer == "because");
}

TEST_CASE("map_answer_to_choice cascade") {
  std::vector<std::string> choices = {"pigtail", "ponytail", "bun", "braid"};
  auto exact = map_answer_to_choice("Ponytail!", choices);
  CHECK(exact.predicted_choice == 1);
  CHECK(exact.mapping_stage == "exact");

  auto contained = map_answer_to_choice("the ponytail style", choices);
  CHECK(contained.predicted_choice == 1);
  CHECK(contained.mapping_stage == "containment");

  std::vector<std::string> phrases = {"red striped cat", "small spotted dog toy",
                                      "yellow bird", "plain fish"};
  auto overlap = map_answer_to_choice("blue spotted dog", phrases);
  CHECK(overlap.predicted_choice == 1);
  CHECK(overlap.mapping_stage == "token_overlap");

  auto fallback = map_answer_to_choice("zzz qqq", choices);
  CHECK(fallback.predicted_choice == 0);
  CHECK(fallback.mapping_stage == "fallback");
}

TEST_CASE("infer_multiple_choice labels options and maps the vote") {
  Sample s = make_sample("m", "Which hairstyle?", "ponytail");
  s.choices = std::vector<std::string>{"pigtail", "ponytail", "bun", "braid"};
  s.correct_choice_index = 1;
  MockBackend backend;
  InferenceConfig config;
  config.variant = InferenceVariant::know_only;
  config.k = 1;
  config.sc_runs = 1;

  // Script the single run to answer "ponytail" exactly.
  backend.set_strict(true);
  std::string labeled_question =
      s.question + "\nOptions:\n(A) pigtail\n(B) ponytail\n(C) bun\n(D) braid";
  std::string know_prompt =
      templates().render(TemplateId::know_gen, {{"question", labeled_question}});
  backend.add_fixture(Role::knowledge_generator_kepo, know_prompt,
                      config.knowledge_params.seed, {"a hairstyle fact", std::nullopt});
  std::string answer_prompt = templates().render_answer_prompt(
      labeled_question, std::nullopt, {"a hairstyle fact"});
  backend.add_fixture(Role::answer_generator, answer_prompt, config.answer_params.seed,
                      {"ponytail", std::nullopt});

  McResult result = infer_multiple_choice(s, backend, templates(), config);
  CHECK(result.predicted_choice == 1);
  CHECK(result.mapping_stage == "exact");

  Sample no_choices = make_sample("n", "Q?", "x");
  CHECK_THROWS_AS(infer_multiple_choice(no_choices, backend, templates(), config), DomainError);
}
