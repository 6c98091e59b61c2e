#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hind/util.hpp"

namespace hind {

enum class Split { train, test, valid };

std::string split_name(Split s);
Split split_from_name(const std::string& name);

// One KBVQA item. Direct-answer samples carry exactly 10 annotated answers
// (duplicates preserved); multiple-choice samples additionally carry 4
// choices and, on train/valid, the correct index.
struct Sample {
  std::string sample_id;
  std::string image_ref;
  std::string question;
  std::vector<std::string> answers;
  std::optional<std::vector<std::string>> choices;
  std::optional<int> correct_choice_index;
  Split split = Split::train;
  bool answers_padded = false;  // A-OKVQA direct_answers cycled up to 10
};

// Lowercased, punctuation stripped, articles removed, number words digitized,
// whitespace collapsed. Idempotent by construction.
std::string normalize(const std::string& text);

// Number of answer entries (duplicates counted) whose normalized form is a
// substring of the normalized haystack. Substring, not word-boundary:
// "ponytails" hits answer "ponytail".
int contains_answer(const std::string& haystack, const std::vector<std::string>& answers);

// MSCOCO-VQA layout: questions file + annotations file, 10 answers per
// question. image_template understands {split} and {image_id:012d}.
std::vector<Sample> load_okvqa(const std::string& questions_file,
                               const std::string& annotations_file, Split split,
                               const std::string& image_template =
                                   "COCO_{split}2014_{image_id:012d}.jpg");

// Single-file A-OKVQA layout. direct_answers shorter than 10 are padded by
// cycling so the VQA-score denominator stays uniform; answers_padded records
// when that happened.
std::vector<Sample> load_aokvqa(const std::string& file, Split split);

// Most frequent answer among the annotations, ties broken lexicographically.
std::string canonical_answer(const Sample& sample);

}  // namespace hind
