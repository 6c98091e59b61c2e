#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hind/util.hpp"

namespace hind {

struct SamplingParams {
  double temperature = 0.7;
  double top_p = 0.95;
  int top_k = 50;  // 0 = disabled
  int max_tokens = 1024;
  long seed = 0;

  static SamplingParams knowledge_defaults() { return {}; }
  static SamplingParams answer_defaults() {
    SamplingParams p;
    p.temperature = 1e-5;
    return p;
  }
};

struct TokenLogprob {
  std::string token;
  double logprob = 0.0;  // always <= 0
};

struct GenerationResult {
  std::string text;
  std::vector<TokenLogprob> token_logprobs;
  std::string finish_reason = "stop";
  // Token concatenation reconstructs text modulo detokenization; false when
  // reconstruction is inexact.
  bool detokenization_exact = true;

  std::vector<double> logprob_values() const;
};

enum class Role {
  hindsight_zero,
  cot_generator,
  knowledge_generator_hdft,
  knowledge_generator_kepo,
  answer_generator,
};

std::string role_name(Role r);
Role role_from_name(const std::string& name);

struct RoleConfig {
  Role role = Role::hindsight_zero;
  std::string endpoint;
  std::string model_name;
  std::string auth_env;  // env var holding the bearer token, optional
};

// All model calls go through this contract. Implementations must be safely
// shareable across concurrent workers.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual GenerationResult generate(Role role, const std::string& prompt,
                                    const std::optional<std::string>& image_ref,
                                    const SamplingParams& params) = 0;

  // Teacher-forced scoring of a fixed completion; logprobs cover exactly the
  // completion tokens. Throws CapabilityError when the endpoint cannot score.
  virtual std::vector<TokenLogprob> score(Role role, const std::string& prompt,
                                          const std::optional<std::string>& image_ref,
                                          const std::string& completion) = 0;
};

}  // namespace hind
