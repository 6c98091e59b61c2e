#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hind {

// Parsed structured reasoning response: image description, rationales,
// ordered steps, knowledge pieces (5 expected), final answer.
struct HindsightZeroRecord {
  std::string image_description;
  std::string rationales;
  std::vector<std::string> steps;
  std::vector<std::string> knowledge;
  std::string final_answer;

  bool operator==(const HindsightZeroRecord&) const = default;
};

enum class Defect {
  missing_section,
  empty_knowledge,  // parsed knowledge count != 5
  no_final_answer,
  malformed_step_numbering,
};

std::string defect_name(Defect d);

struct ParseOutcome {
  std::optional<HindsightZeroRecord> record;
  std::vector<Defect> defects;

  bool has(Defect d) const;
  // A fatal outcome has no usable record at all; non-fatal defects ride along
  // with a partial record.
  bool fatal() const { return !record.has_value(); }
};

// Total over arbitrary byte strings: never throws, all failures surface as
// defects. Section headers are matched case-insensitively after stripping
// "###" separators and markdown decoration; both the "Knowledge:" umbrella
// header and numbered "Knowledge N:" sub-headers are accepted; sections may
// appear in any order.
ParseOutcome parse_hindsight(const std::string& response);

// Canonical CoT text: image description + rationales + steps, excluding
// knowledge and final answer. Empty fields elide their block.
std::string cot_text(const HindsightZeroRecord& record);

// Full canonical serialization; parse_hindsight(serialize_record(r)) == r for
// well-formed records.
std::string serialize_record(const HindsightZeroRecord& record);

// Text after the LAST "The final answer is:" marker, trimmed, trailing
// punctuation removed. CoT text can quote the marker mid-reasoning, so the
// last occurrence wins.
std::optional<std::string> parse_final_answer(const std::string& response);

}  // namespace hind
