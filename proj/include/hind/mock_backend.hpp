#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "hind/backend.hpp"

namespace hind {

// Deterministic backend for tests and offline runs: a pure function of
// (role, prompt, image_ref, params). Lookup order is fixture table first,
// then procedural synthesis keyed by a content hash. In strict mode a missing
// fixture is a BackendError instead.
class MockBackend : public Backend {
 public:
  struct Fixture {
    std::string text;
    std::optional<std::vector<TokenLogprob>> logprobs;  // synthesized when absent
  };

  MockBackend() = default;

  // JSON file: {"fixtures": [{"role": ..., "prompt" | "prompt_digest": ...,
  // "seed": ..., "text": ..., "logprobs": [[tok, lp], ...]?}, ...],
  //             "score_fixtures": [{"role", "prompt"|"prompt_digest",
  //                                 "completion", "logprobs"}, ...]}
  static MockBackend from_file(const std::string& path);

  static std::string fixture_key(Role role, const std::string& prompt_digest, long seed);

  void add_fixture(Role role, const std::string& prompt, long seed, Fixture fixture);
  void add_score_fixture(Role role, const std::string& prompt, const std::string& completion,
                         std::vector<TokenLogprob> logprobs);
  void set_strict(bool strict) { strict_ = strict; }

  // When set, score() evaluates completions under this explicit unigram
  // policy: one whitespace token at a time, log p(token).
  void set_unigram_policy(std::map<std::string, double> token_probs);

  GenerationResult generate(Role role, const std::string& prompt,
                            const std::optional<std::string>& image_ref,
                            const SamplingParams& params) override;

  std::vector<TokenLogprob> score(Role role, const std::string& prompt,
                                  const std::optional<std::string>& image_ref,
                                  const std::string& completion) override;

 private:
  GenerationResult synthesize(Role role, const std::string& prompt,
                              const std::optional<std::string>& image_ref,
                              const SamplingParams& params) const;

  std::map<std::string, Fixture> fixtures_;
  std::map<std::string, std::vector<TokenLogprob>> score_fixtures_;
  std::optional<std::map<std::string, double>> unigram_;
  bool strict_ = false;
};

}  // namespace hind
