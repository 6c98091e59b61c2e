#include "hind/mock_backend.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hind/dataset.hpp"
#include "hind/parsing.hpp"

namespace hind {

using nlohmann::json;

std::string role_name(Role r) {
  switch (r) {
    case Role::hindsight_zero: return "hindsight_zero";
    case Role::cot_generator: return "cot_generator";
    case Role::knowledge_generator_hdft: return "knowledge_generator_hdft";
    case Role::knowledge_generator_kepo: return "knowledge_generator_kepo";
    case Role::answer_generator: return "answer_generator";
  }
  return "?";
}

Role role_from_name(const std::string& name) {
  for (Role r : {Role::hindsight_zero, Role::cot_generator, Role::knowledge_generator_hdft,
                 Role::knowledge_generator_kepo, Role::answer_generator}) {
    if (role_name(r) == name) return r;
  }
  throw ConfigError("unknown backend role: " + name);
}

std::vector<double> GenerationResult::logprob_values() const {
  std::vector<double> out;
  out.reserve(token_logprobs.size());
  for (const auto& t : token_logprobs) out.push_back(t.logprob);
  return out;
}

std::string MockBackend::fixture_key(Role role, const std::string& prompt_digest, long seed) {
  return role_name(role) + ":" + prompt_digest + ":" + std::to_string(seed);
}

void MockBackend::add_fixture(Role role, const std::string& prompt, long seed,
                              Fixture fixture) {
  fixtures_[fixture_key(role, digest(prompt), seed)] = std::move(fixture);
}

void MockBackend::add_score_fixture(Role role, const std::string& prompt,
                                    const std::string& completion,
                                    std::vector<TokenLogprob> logprobs) {
  score_fixtures_[role_name(role) + ":" + digest(prompt) + ":" + digest(completion)] =
      std::move(logprobs);
}

void MockBackend::set_unigram_policy(std::map<std::string, double> token_probs) {
  unigram_ = std::move(token_probs);
}

MockBackend MockBackend::from_file(const std::string& path) {
  MockBackend backend;
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) throw SchemaError("invalid JSON fixture file: " + path);
  auto prompt_digest = [](const json& e) {
    if (e.contains("prompt_digest")) return e.at("prompt_digest").get<std::string>();
    return digest(e.at("prompt").get<std::string>());
  };
  auto parse_logprobs = [](const json& arr) {
    std::vector<TokenLogprob> lps;
    for (const auto& pair : arr) {
      lps.push_back({pair.at(0).get<std::string>(), pair.at(1).get<double>()});
    }
    return lps;
  };
  for (const auto& e : j.value("fixtures", json::array())) {
    Fixture f;
    f.text = e.at("text").get<std::string>();
    if (e.contains("logprobs")) f.logprobs = parse_logprobs(e.at("logprobs"));
    Role role = role_from_name(e.at("role").get<std::string>());
    backend.fixtures_[fixture_key(role, prompt_digest(e), e.value("seed", 0L))] = std::move(f);
  }
  for (const auto& e : j.value("score_fixtures", json::array())) {
    backend.score_fixtures_[e.at("role").get<std::string>() + ":" + prompt_digest(e) + ":" +
                            digest(e.at("completion").get<std::string>())] =
        parse_logprobs(e.at("logprobs"));
  }
  return backend;
}

namespace {

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

// Deterministic per-token logprobs in [-0.65, -0.05).
std::vector<TokenLogprob> synth_logprobs(const std::string& text, std::uint64_t hash) {
  std::vector<TokenLogprob> out;
  DetRng rng(hash);
  for (const auto& tok : whitespace_tokens(text)) {
    out.push_back({tok, -(0.05 + 0.6 * rng.unit())});
  }
  return out;
}

std::string last_nonempty_line(const std::vector<std::string>& lines, std::size_t skip_back) {
  std::size_t seen = 0;
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (trim(*it).empty()) continue;
    if (seen++ == skip_back) return trim(*it);
  }
  return "";
}

std::string extract_question(const std::string& prompt) {
  std::size_t pos = prompt.rfind("Question:");
  if (pos == std::string::npos) return "";
  std::size_t end = prompt.find('\n', pos);
  return trim(prompt.substr(pos + 9, end == std::string::npos ? std::string::npos
                                                              : end - pos - 9));
}

const char* kFillerWords[] = {"object",  "scene",   "context", "detail", "element",
                              "feature", "subject", "setting", "aspect", "item"};

std::string filler(DetRng& rng) { return kFillerWords[rng.below(10)]; }

}  // namespace

GenerationResult MockBackend::synthesize(Role role, const std::string& prompt,
                                         const std::optional<std::string>& image_ref,
                                         const SamplingParams& params) const {
  std::string key_material = role_name(role) + "\x1f" + digest(prompt) + "\x1f" +
                             (image_ref ? *image_ref : "") + "\x1f" +
                             std::to_string(params.seed);
  std::uint64_t h = fnv1a64(key_material);
  DetRng rng(h);
  auto lines = split_lines(prompt);

  GenerationResult result;
  switch (role) {
    case Role::hindsight_zero: {
      // Listing layout ends with the question then the answer.
      std::string answer = last_nonempty_line(lines, 0);
      std::string question = last_nonempty_line(lines, 1);
      HindsightZeroRecord rec;
      rec.image_description =
          "The image shows a " + filler(rng) + " relevant to the question.";
      rec.rationales = "- The " + filler(rng) + " suggests the answer.";
      bool steps_hit = rng.unit() < 0.7;
      rec.steps = {"Identify the " + filler(rng) + " in the image.",
                   "Relate the " + filler(rng) + " to the question.",
                   steps_hit ? "Conclude that the answer is " + answer + "."
                             : "Conclude from the " + filler(rng) + "."};
      for (int i = 0; i < 5; ++i) {
        bool hit = rng.unit() < 0.5;
        rec.knowledge.push_back(hit ? "the " + filler(rng) + " is associated with " + answer
                                    : "the " + filler(rng) + " relates to the " + filler(rng));
      }
      rec.final_answer = rng.unit() < 0.9 ? answer : filler(rng);
      result.text = serialize_record(rec);
      break;
    }
    case Role::cot_generator: {
      HindsightZeroRecord rec;
      rec.image_description = "The image shows a " + filler(rng) + ".";
      rec.rationales = "- The question concerns the " + filler(rng) + ".";
      rec.steps = {"Observe the " + filler(rng) + ".",
                   "Reason about the " + filler(rng) + "."};
      result.text = cot_text(rec);
      break;
    }
    case Role::knowledge_generator_hdft:
    case Role::knowledge_generator_kepo: {
      std::string question = extract_question(prompt);
      auto qtokens = whitespace_tokens(normalize(question));
      std::string anchor = qtokens.empty() ? filler(rng) : qtokens[rng.below(qtokens.size())];
      result.text =
          "the " + anchor + " is commonly linked with the " + filler(rng) + " in practice";
      break;
    }
    case Role::answer_generator: {
      auto tokens = whitespace_tokens(normalize(prompt));
      result.text = tokens.empty() ? filler(rng) : tokens[rng.below(tokens.size())];
      break;
    }
  }
  result.token_logprobs = synth_logprobs(result.text, h ^ 0x5bd1e995u);
  return result;
}

GenerationResult MockBackend::generate(Role role, const std::string& prompt,
                                       const std::optional<std::string>& image_ref,
                                       const SamplingParams& params) {
  auto it = fixtures_.find(fixture_key(role, digest(prompt), params.seed));
  if (it != fixtures_.end()) {
    GenerationResult result;
    result.text = it->second.text;
    result.token_logprobs = it->second.logprobs
                                ? *it->second.logprobs
                                : synth_logprobs(it->second.text, fnv1a64(it->second.text));
    return result;
  }
  if (strict_) {
    throw BackendError("no mock fixture for role=" + role_name(role) +
                       " prompt_digest=" + digest(prompt) +
                       " seed=" + std::to_string(params.seed));
  }
  return synthesize(role, prompt, image_ref, params);
}

std::vector<TokenLogprob> MockBackend::score(Role role, const std::string& prompt,
                                             const std::optional<std::string>& /*image_ref*/,
                                             const std::string& completion) {
  if (completion.empty()) return {};
  auto it =
      score_fixtures_.find(role_name(role) + ":" + digest(prompt) + ":" + digest(completion));
  if (it != score_fixtures_.end()) return it->second;
  if (unigram_) {
    std::vector<TokenLogprob> out;
    for (const auto& tok : whitespace_tokens(completion)) {
      auto p = unigram_->find(tok);
      double prob = p != unigram_->end() ? p->second : 1e-6;
      out.push_back({tok, std::log(prob)});
    }
    return out;
  }
  if (strict_) {
    throw BackendError("no mock score fixture for role=" + role_name(role));
  }
  // Procedural scoring: per-token hash of (role, prompt digest, token, index).
  std::vector<TokenLogprob> out;
  std::string base = role_name(role) + "\x1f" + digest(prompt);
  auto tokens = whitespace_tokens(completion);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    DetRng rng(fnv1a64(base + "\x1f" + tokens[i] + "\x1f" + std::to_string(i)));
    out.push_back({tokens[i], -(0.05 + 0.6 * rng.unit())});
  }
  return out;
}

}  // namespace hind
