#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hind/util.hpp"

namespace hind {

enum class TemplateId {
  hindsight_zero,
  cot_gen,
  know_gen,
  answer_cot_know,
  answer_know,
};

std::string template_name(TemplateId id);

using Bindings = std::map<std::string, std::string>;

// The five prompt templates, loaded from UTF-8 data files. Bodies are kept
// verbatim, newline-preserving; slots are {question}, {answer},
// {cot_process}, {knowledge}.
class TemplateSet {
 public:
  // Expects <dir>/hindsight_zero.txt, cot_gen.txt, know_gen.txt,
  // answer_cot_know.txt, answer_know.txt.
  static TemplateSet load(const std::string& dir);

  const std::string& body(TemplateId id) const;
  std::vector<std::string> slots(TemplateId id) const;

  // Exact substitution, no trimming. Missing slot -> BindingError naming the
  // slot; extra slots are ignored but recorded in *warnings when given.
  std::string render(TemplateId id, const Bindings& bindings,
                     std::vector<std::string>* warnings = nullptr) const;

  // Answer-generator prompt. cot present selects the CoT+knowledge template,
  // absent selects the knowledge-only one. Knowledge pieces are joined as
  // "Knowledge 1: ..." lines in the given order (the caller controls order;
  // the training side shuffles before calling).
  std::string render_answer_prompt(const std::string& question,
                                   const std::optional<std::string>& cot,
                                   const std::vector<std::string>& knowledge) const;

 private:
  std::map<TemplateId, std::string> bodies_;
};

// "Knowledge 1: a\nKnowledge 2: b" -- the numbering convention shared by
// answer prompts and the response grammar.
std::string format_knowledge_block(const std::vector<std::string>& knowledge);

}  // namespace hind
