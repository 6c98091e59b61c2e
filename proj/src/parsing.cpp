#include "hind/parsing.hpp"

#include <cctype>

#include "hind/util.hpp"

namespace hind {

std::string defect_name(Defect d) {
  switch (d) {
    case Defect::missing_section: return "missing_section";
    case Defect::empty_knowledge: return "empty_knowledge";
    case Defect::no_final_answer: return "no_final_answer";
    case Defect::malformed_step_numbering: return "malformed_step_numbering";
  }
  return "?";
}

bool ParseOutcome::has(Defect d) const {
  for (Defect x : defects)
    if (x == d) return true;
  return false;
}

namespace {

enum class HeaderKind {
  image_description,
  rationales,
  steps_intro,
  step,
  knowledge_umbrella,
  knowledge_n,
  final_answer,
};

struct HeaderMatch {
  HeaderKind kind;
  int number = 0;
  std::string inline_content;
};

bool is_decoration(char c) { return c == '*' || c == '_' || c == '#' || c == '>' || c == '-'; }

// Strips leading markdown decoration; models wrap headers in ** or prefix
// them with #'s unpredictably.
std::string strip_decoration(const std::string& line) {
  std::size_t b = 0;
  while (b < line.size() &&
         (std::isspace(static_cast<unsigned char>(line[b])) || is_decoration(line[b]))) {
    ++b;
  }
  return line.substr(b);
}

std::size_t skip_filler(const std::string& s, std::size_t pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t' || s[pos] == '*' || s[pos] == '_')) {
    ++pos;
  }
  return pos;
}

// Skips filler, one optional ':' or '.', filler again.
std::size_t skip_separator(const std::string& s, std::size_t pos) {
  pos = skip_filler(s, pos);
  if (pos < s.size() && (s[pos] == ':' || s[pos] == '.')) ++pos;
  return skip_filler(s, pos);
}

std::optional<HeaderMatch> match_header(const std::string& raw_line) {
  std::string s = strip_decoration(raw_line);
  if (s.empty()) return std::nullopt;
  std::string ls = to_lower(s);
  // Curly apostrophe, as emitted by some models.
  std::size_t p;
  while ((p = ls.find("\xe2\x80\x99")) != std::string::npos) ls.replace(p, 3, "'");

  auto rest_from = [&s](std::size_t pos) { return trim(s.substr(std::min(pos, s.size()))); };

  if (starts_with_icase(ls, "image description")) {
    return HeaderMatch{HeaderKind::image_description, 0,
                       rest_from(skip_separator(s, 17))};
  }
  if (starts_with_icase(ls, "rationale")) {
    std::size_t pos = 9;
    if (pos < ls.size() && ls[pos] == 's') ++pos;
    return HeaderMatch{HeaderKind::rationales, 0, rest_from(skip_separator(s, pos))};
  }
  if (starts_with_icase(ls, "let's think step by step") ||
      starts_with_icase(ls, "lets think step by step")) {
    return HeaderMatch{HeaderKind::steps_intro, 0, ""};
  }
  if (starts_with_icase(ls, "the final answer is")) {
    return HeaderMatch{HeaderKind::final_answer, 0, rest_from(skip_separator(s, 19))};
  }
  // "Step N" / "Knowledge N" / "Knowledge" need a number or separator right
  // after the keyword so ordinary prose ("step towards...") doesn't match.
  for (auto [word, numbered, plain] :
       {std::tuple{std::string("step"), HeaderKind::step, std::optional<HeaderKind>{}},
        std::tuple{std::string("knowledge"), HeaderKind::knowledge_n,
                   std::optional<HeaderKind>{HeaderKind::knowledge_umbrella}}}) {
    if (!starts_with_icase(ls, word)) continue;
    std::size_t pos = skip_filler(ls, word.size());
    if (pos < ls.size() && std::isdigit(static_cast<unsigned char>(ls[pos]))) {
      int number = 0;
      while (pos < ls.size() && std::isdigit(static_cast<unsigned char>(ls[pos]))) {
        number = number * 10 + (ls[pos] - '0');
        ++pos;
      }
      std::size_t after = skip_filler(ls, pos);
      if (after >= ls.size() || ls[after] == ':' || ls[after] == '.') {
        return HeaderMatch{numbered, number, rest_from(skip_separator(s, pos))};
      }
    } else if (plain && (pos >= ls.size() || ls[pos] == ':')) {
      return HeaderMatch{*plain, 0, rest_from(skip_separator(s, word.size()))};
    }
  }
  return std::nullopt;
}

std::string join_trimmed(const std::vector<std::string>& lines) {
  return trim(join(lines, "\n"));
}

std::string strip_trailing_punct(std::string s) {
  while (!s.empty() && (std::ispunct(static_cast<unsigned char>(s.back())) ||
                        std::isspace(static_cast<unsigned char>(s.back())))) {
    s.pop_back();
  }
  return s;
}

}  // namespace

ParseOutcome parse_hindsight(const std::string& response) {
  // "###" acts as a section separator even mid-line.
  std::string pre = response;
  std::size_t pos = 0;
  while ((pos = pre.find("###", pos)) != std::string::npos) pre.replace(pos, 3, "\n");

  enum class Sec { none, ic, rat, intro, step, umbrella, knowledge_n, final_ };
  Sec current = Sec::none;

  std::vector<std::string> ic_lines, rat_lines;
  std::vector<std::pair<int, std::vector<std::string>>> steps;
  std::vector<std::vector<std::string>> numbered_knowledge;
  std::vector<std::string> umbrella_pieces;
  std::vector<std::string> final_lines;
  int sections_seen = 0;

  for (const auto& line : split_lines(pre)) {
    auto m = match_header(line);
    if (!m) {
      switch (current) {
        case Sec::ic: ic_lines.push_back(line); break;
        case Sec::rat: rat_lines.push_back(line); break;
        case Sec::step:
          if (!steps.empty()) steps.back().second.push_back(line);
          break;
        case Sec::knowledge_n:
          if (!numbered_knowledge.empty()) numbered_knowledge.back().push_back(line);
          break;
        case Sec::umbrella: {
          // Unnumbered pieces under the bare "Knowledge:" header, one per
          // non-empty line.
          std::string t = trim(strip_decoration(line));
          if (!t.empty()) umbrella_pieces.push_back(t);
          break;
        }
        case Sec::final_: final_lines.push_back(line); break;
        case Sec::intro:
        case Sec::none: break;  // preamble / filler between intro and Step 1
      }
      continue;
    }
    ++sections_seen;
    switch (m->kind) {
      case HeaderKind::image_description:
        current = Sec::ic;
        if (!m->inline_content.empty()) ic_lines.push_back(m->inline_content);
        break;
      case HeaderKind::rationales:
        current = Sec::rat;
        if (!m->inline_content.empty()) rat_lines.push_back(m->inline_content);
        break;
      case HeaderKind::steps_intro:
        current = Sec::intro;
        break;
      case HeaderKind::step:
        current = Sec::step;
        steps.push_back({m->number, {}});
        if (!m->inline_content.empty()) steps.back().second.push_back(m->inline_content);
        break;
      case HeaderKind::knowledge_umbrella:
        current = Sec::umbrella;
        break;
      case HeaderKind::knowledge_n:
        current = Sec::knowledge_n;
        numbered_knowledge.push_back({});
        if (!m->inline_content.empty())
          numbered_knowledge.back().push_back(m->inline_content);
        break;
      case HeaderKind::final_answer:
        current = Sec::final_;
        final_lines.clear();  // last marker wins
        if (!m->inline_content.empty()) final_lines.push_back(m->inline_content);
        break;
    }
  }

  ParseOutcome outcome;
  if (sections_seen == 0) {
    outcome.defects.push_back(Defect::missing_section);
    return outcome;
  }

  HindsightZeroRecord rec;
  rec.image_description = join_trimmed(ic_lines);
  rec.rationales = join_trimmed(rat_lines);
  bool numbering_ok = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].first != static_cast<int>(i) + 1) numbering_ok = false;
    rec.steps.push_back(join_trimmed(steps[i].second));
  }
  for (const auto& piece : numbered_knowledge) rec.knowledge.push_back(join_trimmed(piece));
  for (const auto& piece : umbrella_pieces) rec.knowledge.push_back(piece);
  rec.final_answer = strip_trailing_punct(join_trimmed(final_lines));

  if (rec.steps.empty() || !numbering_ok) {
    outcome.defects.push_back(Defect::malformed_step_numbering);
  }
  if (rec.knowledge.size() != 5) outcome.defects.push_back(Defect::empty_knowledge);
  if (rec.final_answer.empty()) outcome.defects.push_back(Defect::no_final_answer);
  outcome.record = std::move(rec);
  return outcome;
}

std::string cot_text(const HindsightZeroRecord& record) {
  std::vector<std::string> blocks;
  if (!record.image_description.empty()) {
    blocks.push_back("Image Description:\n" + record.image_description);
  }
  if (!record.rationales.empty()) {
    blocks.push_back("Rationales:\n" + record.rationales);
  }
  if (!record.steps.empty()) {
    std::string block = "Let's think step by step.";
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
      block += "\nStep " + std::to_string(i + 1) + ":\n" + record.steps[i];
    }
    blocks.push_back(std::move(block));
  }
  return join(blocks, "\n\n");
}

std::string serialize_record(const HindsightZeroRecord& record) {
  std::string out = "### Image Description:\n" + record.image_description +
                    "\n### Rationales:\n" + record.rationales +
                    "\n### Let's think step by step.";
  for (std::size_t i = 0; i < record.steps.size(); ++i) {
    out += "\n### Step " + std::to_string(i + 1) + ":\n" + record.steps[i];
  }
  out += "\n### Knowledge:";
  for (std::size_t i = 0; i < record.knowledge.size(); ++i) {
    out += "\n### Knowledge " + std::to_string(i + 1) + ":\n" + record.knowledge[i];
  }
  out += "\n### The final answer is: " + record.final_answer;
  return out;
}

std::optional<std::string> parse_final_answer(const std::string& response) {
  static const std::string marker = "the final answer is";
  std::string lower = to_lower(response);
  std::size_t pos = lower.rfind(marker);
  if (pos == std::string::npos) return std::nullopt;
  std::size_t start = pos + marker.size();
  while (start < response.size() &&
         (response[start] == ':' || response[start] == ' ' || response[start] == '\t')) {
    ++start;
  }
  std::size_t end = response.find('\n', start);
  if (end == std::string::npos) end = response.size();
  std::string answer = strip_trailing_punct(trim(response.substr(start, end - start)));
  if (answer.empty()) return std::nullopt;
  return answer;
}

}  // namespace hind
