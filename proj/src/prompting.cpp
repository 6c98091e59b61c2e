#include "hind/prompting.hpp"

#include <array>
#include <filesystem>

namespace hind {

namespace {

constexpr std::array<TemplateId, 5> kAllTemplates = {
    TemplateId::hindsight_zero, TemplateId::cot_gen, TemplateId::know_gen,
    TemplateId::answer_cot_know, TemplateId::answer_know};

constexpr std::array<const char*, 4> kKnownSlots = {"question", "answer", "cot_process",
                                                    "knowledge"};

}  // namespace

std::string template_name(TemplateId id) {
  switch (id) {
    case TemplateId::hindsight_zero: return "hindsight_zero";
    case TemplateId::cot_gen: return "cot_gen";
    case TemplateId::know_gen: return "know_gen";
    case TemplateId::answer_cot_know: return "answer_cot_know";
    case TemplateId::answer_know: return "answer_know";
  }
  return "?";
}

TemplateSet TemplateSet::load(const std::string& dir) {
  TemplateSet set;
  for (TemplateId id : kAllTemplates) {
    auto path = std::filesystem::path(dir) / (template_name(id) + ".txt");
    set.bodies_[id] = read_file(path);
  }
  return set;
}

const std::string& TemplateSet::body(TemplateId id) const {
  auto it = bodies_.find(id);
  if (it == bodies_.end()) throw ConfigError("template not loaded: " + template_name(id));
  return it->second;
}

std::vector<std::string> TemplateSet::slots(TemplateId id) const {
  const std::string& b = body(id);
  std::vector<std::string> out;
  for (const char* slot : kKnownSlots) {
    if (b.find("{" + std::string(slot) + "}") != std::string::npos) out.emplace_back(slot);
  }
  return out;
}

std::string TemplateSet::render(TemplateId id, const Bindings& bindings,
                                std::vector<std::string>* warnings) const {
  std::string out = body(id);
  auto declared = slots(id);
  for (const auto& slot : declared) {
    auto it = bindings.find(slot);
    if (it == bindings.end()) {
      throw BindingError("template " + template_name(id) + " missing binding for slot '" +
                         slot + "'");
    }
    std::string marker = "{" + slot + "}";
    std::size_t pos = 0;
    while ((pos = out.find(marker, pos)) != std::string::npos) {
      out.replace(pos, marker.size(), it->second);
      pos += it->second.size();
    }
  }
  if (warnings) {
    for (const auto& [slot, _] : bindings) {
      bool known = false;
      for (const auto& d : declared) known = known || d == slot;
      if (!known) warnings->push_back("ignored binding for unknown slot '" + slot + "'");
    }
  }
  return out;
}

std::string format_knowledge_block(const std::vector<std::string>& knowledge) {
  std::vector<std::string> lines;
  lines.reserve(knowledge.size());
  for (std::size_t i = 0; i < knowledge.size(); ++i) {
    lines.push_back("Knowledge " + std::to_string(i + 1) + ": " + knowledge[i]);
  }
  return join(lines, "\n");
}

std::string TemplateSet::render_answer_prompt(const std::string& question,
                                              const std::optional<std::string>& cot,
                                              const std::vector<std::string>& knowledge) const {
  if (!cot && knowledge.empty()) {
    throw UsageError("answer prompt needs a CoT, knowledge pieces, or both");
  }
  Bindings b{{"question", question}, {"knowledge", format_knowledge_block(knowledge)}};
  if (cot) {
    b["cot_process"] = *cot;
    return render(TemplateId::answer_cot_know, b);
  }
  return render(TemplateId::answer_know, b);
}

}  // namespace hind
