#include <doctest.h>

#include <string>
#include <vector>

#include "hind/prompting.hpp"

using namespace hind;

namespace {
const TemplateSet& templates() {
  static TemplateSet set = TemplateSet::load(HIND_PROMPTS_DIR);
  return set;
}
}  // namespace

TEST_CASE("template bodies match frozen digests") {
  // Digests of the canonical template files, frozen at authoring time.
  // Any byte-level drift (trailing spaces included) fails here.
  struct Expect {
    TemplateId id;
    const char* digest;
  };
  const Expect expected[] = {
      {TemplateId::hindsight_zero, "aa4ba8a9923fc689"},
      {TemplateId::cot_gen, "71163f0a70a854ba"},
      {TemplateId::know_gen, "808326609dd536c2"},
      {TemplateId::answer_cot_know, "8e7122d37f0c93e2"},
      {TemplateId::answer_know, "2e7a9b6be1c59318"},
  };
  for (const auto& e : expected) {
    CAPTURE(template_name(e.id));
    CHECK(hex64(fnv1a64(templates().body(e.id))) == e.digest);
  }
}

TEST_CASE("template slot inventory") {
  CHECK(templates().slots(TemplateId::hindsight_zero) ==
        std::vector<std::string>{"question", "answer"});
  CHECK(templates().slots(TemplateId::cot_gen) == std::vector<std::string>{"question"});
  CHECK(templates().slots(TemplateId::know_gen) == std::vector<std::string>{"question"});
  CHECK(templates().slots(TemplateId::answer_cot_know) ==
        std::vector<std::string>{"question", "cot_process", "knowledge"});
  CHECK(templates().slots(TemplateId::answer_know) ==
        std::vector<std::string>{"question", "knowledge"});
}

TEST_CASE("render substitutes exactly, without trimming") {
  std::string out = templates().render(TemplateId::know_gen, {{"question", "  Why?  "}});
  CHECK(out.find("Question:   Why?  ") != std::string::npos);
  CHECK(out.find("{question}") == std::string::npos);
  // Repeated slots are all substituted.
  std::string ans = templates().render(TemplateId::answer_know, {{"question", "Q__Q"},
                                                                 {"knowledge", "K__K"}});
  std::size_t first = ans.find("Q__Q");
  REQUIRE(first != std::string::npos);
  CHECK(ans.find("Q__Q", first + 1) != std::string::npos);
}

TEST_CASE("render errors and warnings") {
  CHECK_THROWS_WITH_AS(templates().render(TemplateId::hindsight_zero, {{"question", "q"}}),
                       doctest::Contains("answer"), BindingError);
  std::vector<std::string> warnings;
  templates().render(TemplateId::cot_gen, {{"question", "q"}, {"bogus", "v"}}, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("bogus") != std::string::npos);
}

TEST_CASE("format_knowledge_block numbering") {
  CHECK(format_knowledge_block({}) == "");
  CHECK(format_knowledge_block({"a"}) == "Knowledge 1: a");
  CHECK(format_knowledge_block({"a", "b", "c"}) ==
        "Knowledge 1: a\nKnowledge 2: b\nKnowledge 3: c");
}

TEST_CASE("render_answer_prompt selects the right template") {
  std::vector<std::string> know = {"fact one", "fact two"};
  std::string with_cot = templates().render_answer_prompt("Why?", std::string("Step 1: think"), know);
  CHECK(with_cot.find("Step 1: think") != std::string::npos);
  CHECK(with_cot.find("Knowledge 1: fact one") != std::string::npos);
  CHECK(with_cot.find("Knowledge 2: fact two") != std::string::npos);

  std::string without_cot = templates().render_answer_prompt("Why?", std::nullopt, know);
  CHECK(without_cot.find("Step 1: think") == std::string::npos);
  CHECK(without_cot.find("Knowledge 1: fact one") != std::string::npos);

  // CoT present with empty knowledge is allowed (knowledge block renders empty).
  std::string cot_only = templates().render_answer_prompt("Why?", std::string("c"), {});
  CHECK(cot_only.find("Knowledge 1:") == std::string::npos);

  // Neither CoT nor knowledge is a usage error: there is no matching template.
  CHECK_THROWS_AS(templates().render_answer_prompt("Why?", std::nullopt, {}), UsageError);
}

TEST_CASE("missing template directory fails loudly") {
  CHECK_THROWS_AS(TemplateSet::load("/nonexistent/prompts"), IoError);
}
