#include "hind/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace hind {

using nlohmann::json;

std::string split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::test: return "test";
    case Split::valid: return "valid";
  }
  return "train";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::train;
  if (name == "test") return Split::test;
  if (name == "valid" || name == "val") return Split::valid;
  throw ConfigError("unknown split: " + name);
}

namespace {

const std::unordered_map<std::string, std::string>& number_words() {
  // zero-twenty; beyond that digits-only matching applies.
  static const std::unordered_map<std::string, std::string> map = {
      {"zero", "0"},    {"one", "1"},       {"two", "2"},      {"three", "3"},
      {"four", "4"},    {"five", "5"},      {"six", "6"},      {"seven", "7"},
      {"eight", "8"},   {"nine", "9"},      {"ten", "10"},     {"eleven", "11"},
      {"twelve", "12"}, {"thirteen", "13"}, {"fourteen", "14"},{"fifteen", "15"},
      {"sixteen", "16"},{"seventeen", "17"},{"eighteen", "18"},{"nineteen", "19"},
      {"twenty", "20"}};
  return map;
}

bool is_article(const std::string& token) {
  return token == "a" || token == "an" || token == "the";
}

}  // namespace

std::string normalize(const std::string& text) {
  std::string spaced;
  spaced.reserve(text.size());
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      spaced.push_back(static_cast<char>(std::tolower(c)));
    } else {
      spaced.push_back(' ');
    }
  }
  std::istringstream in(spaced);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) {
    if (is_article(tok)) continue;
    auto it = number_words().find(tok);
    tokens.push_back(it != number_words().end() ? it->second : tok);
  }
  return join(tokens, " ");
}

int contains_answer(const std::string& haystack, const std::vector<std::string>& answers) {
  std::string h = normalize(haystack);
  if (h.empty()) return 0;
  int count = 0;
  for (const auto& a : answers) {
    std::string n = normalize(a);
    if (!n.empty() && h.find(n) != std::string::npos) ++count;
  }
  return count;
}

namespace {

json parse_json_file(const std::string& path) {
  auto text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SchemaError("invalid JSON in " + path);
  return j;
}

std::string render_image_ref(const std::string& tmpl, Split split, long image_id) {
  // OK-VQA test questions are asked over the COCO val2014 images.
  std::string coco_split = (split == Split::train) ? "train" : "val";
  std::string out = tmpl;
  auto replace_all = [&out](const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, from.size(), to);
      pos += to.size();
    }
  };
  char padded[32];
  std::snprintf(padded, sizeof(padded), "%012ld", image_id);
  replace_all("{split}", coco_split);
  replace_all("{image_id:012d}", padded);
  replace_all("{image_id}", std::to_string(image_id));
  return out;
}

}  // namespace

std::vector<Sample> load_okvqa(const std::string& questions_file,
                               const std::string& annotations_file, Split split,
                               const std::string& image_template) {
  json qj = parse_json_file(questions_file);
  json aj = parse_json_file(annotations_file);
  if (!qj.contains("questions") || !qj["questions"].is_array())
    throw SchemaError("questions file lacks a 'questions' array: " + questions_file);
  if (!aj.contains("annotations") || !aj["annotations"].is_array())
    throw SchemaError("annotations file lacks an 'annotations' array: " + annotations_file);

  std::unordered_map<long, const json*> ann_by_qid;
  for (const auto& ann : aj["annotations"]) {
    ann_by_qid[ann.at("question_id").get<long>()] = &ann;
  }

  std::vector<Sample> samples;
  std::unordered_set<std::string> seen_ids;
  for (const auto& q : qj["questions"]) {
    long qid = q.at("question_id").get<long>();
    auto it = ann_by_qid.find(qid);
    if (it == ann_by_qid.end()) {
      throw SchemaError("question_id " + std::to_string(qid) + " has no annotation entry");
    }
    const json& ann = *it->second;
    Sample s;
    s.sample_id = std::to_string(qid);
    s.question = q.at("question").get<std::string>();
    s.image_ref = render_image_ref(image_template, split, q.at("image_id").get<long>());
    s.split = split;
    for (const auto& a : ann.at("answers")) {
      s.answers.push_back(a.at("answer").get<std::string>());
    }
    if (s.answers.size() != 10) {
      throw SchemaError("question_id " + std::to_string(qid) + " has " +
                        std::to_string(s.answers.size()) + " answers, expected 10");
    }
    if (!seen_ids.insert(s.sample_id).second) {
      throw SchemaError("duplicate question_id " + s.sample_id);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<Sample> load_aokvqa(const std::string& file, Split split) {
  json j = parse_json_file(file);
  if (!j.is_array()) throw SchemaError("A-OKVQA file is not a JSON array: " + file);
  std::vector<Sample> samples;
  std::unordered_set<std::string> seen_ids;
  std::size_t index = 0;
  for (const auto& rec : j) {
    Sample s;
    try {
      s.sample_id = rec.at("question_id").get<std::string>();
      s.question = rec.at("question").get<std::string>();
      s.split = split;
      long image_id = rec.at("image_id").get<long>();
      char padded[32];
      std::snprintf(padded, sizeof(padded), "%012ld.jpg", image_id);
      s.image_ref = padded;
      if (rec.contains("choices")) {
        s.choices = rec.at("choices").get<std::vector<std::string>>();
      }
      if (rec.contains("correct_choice_idx") && !rec.at("correct_choice_idx").is_null()) {
        int idx = rec.at("correct_choice_idx").get<int>();
        if (!s.choices || idx < 0 || idx >= static_cast<int>(s.choices->size())) {
          throw SchemaError("correct_choice_idx out of range");
        }
        s.correct_choice_index = idx;
      }
      if (rec.contains("direct_answers") && rec.at("direct_answers").is_array()) {
        s.answers = rec.at("direct_answers").get<std::vector<std::string>>();
      }
    } catch (const SchemaError&) {
      throw SchemaError("malformed A-OKVQA record at index " + std::to_string(index));
    } catch (const json::exception& e) {
      throw SchemaError("malformed A-OKVQA record at index " + std::to_string(index) + ": " +
                        e.what());
    }
    if (!s.answers.empty() && s.answers.size() < 10) {
      std::size_t original = s.answers.size();
      while (s.answers.size() < 10) {
        s.answers.push_back(s.answers[s.answers.size() % original]);
      }
      s.answers_padded = true;
    }
    if (!seen_ids.insert(s.sample_id).second) {
      throw SchemaError("duplicate question_id " + s.sample_id);
    }
    samples.push_back(std::move(s));
    ++index;
  }
  return samples;
}

std::string canonical_answer(const Sample& sample) {
  if (sample.answers.empty()) {
    if (sample.choices && sample.correct_choice_index) {
      return (*sample.choices)[*sample.correct_choice_index];
    }
    throw DomainError("sample " + sample.sample_id + " has no answers");
  }
  std::map<std::string, int> counts;
  for (const auto& a : sample.answers) ++counts[a];
  std::string best;
  int best_count = -1;
  for (const auto& [answer, count] : counts) {
    if (count > best_count) {  // map iteration is sorted, so ties stay lexicographic
      best = answer;
      best_count = count;
    }
  }
  return best;
}

}  // namespace hind
