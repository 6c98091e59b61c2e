#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hind/backend.hpp"

namespace hind {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// nullopt signals a transport-level failure (connect/timeout); those are
// retried with exponential backoff. Injectable so tests can count requests
// without a server.
using Transport = std::function<std::optional<HttpResponse>(
    const std::string& endpoint, const std::string& path, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>& headers)>;

struct RetryPolicy {
  int max_retries = 3;
  int base_delay_ms = 200;
};

// OpenAI-compatible chat-completions client. generate() POSTs to
// {endpoint}/chat/completions with logprobs=true; score() uses the legacy
// /completions echo protocol for teacher-forced logprobs.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(std::map<Role, RoleConfig> roles, RetryPolicy retry = {},
                       Transport transport = nullptr);

  GenerationResult generate(Role role, const std::string& prompt,
                            const std::optional<std::string>& image_ref,
                            const SamplingParams& params) override;

  std::vector<TokenLogprob> score(Role role, const std::string& prompt,
                                  const std::optional<std::string>& image_ref,
                                  const std::string& completion) override;

 private:
  const RoleConfig& config_for(Role role) const;
  HttpResponse post_with_retry(const RoleConfig& cfg, const std::string& path,
                               const std::string& body);

  std::map<Role, RoleConfig> roles_;
  RetryPolicy retry_;
  Transport transport_;
};

}  // namespace hind
