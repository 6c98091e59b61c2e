#include "hind/http_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace hind {

using nlohmann::json;

namespace {

std::optional<HttpResponse> default_transport(
    const std::string& endpoint, const std::string& path, const std::string& body,
    const std::vector<std::pair<std::string, std::string>>& headers) {
  httplib::Client client(endpoint);
  client.set_read_timeout(300, 0);
  httplib::Headers hdrs;
  for (const auto& [k, v] : headers) hdrs.emplace(k, v);
  auto res = client.Post(path, hdrs, body, "application/json");
  if (!res) return std::nullopt;
  return HttpResponse{res->status, res->body};
}

std::vector<std::pair<std::string, std::string>> auth_headers(const RoleConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> headers;
  if (!cfg.auth_env.empty()) {
    const char* token = std::getenv(cfg.auth_env.c_str());
    if (!token) throw ConfigError("auth env var not set: " + cfg.auth_env);
    headers.emplace_back("Authorization", std::string("Bearer ") + token);
  }
  return headers;
}

}  // namespace

HttpBackend::HttpBackend(std::map<Role, RoleConfig> roles, RetryPolicy retry,
                         Transport transport)
    : roles_(std::move(roles)),
      retry_(retry),
      transport_(transport ? std::move(transport) : default_transport) {}

const RoleConfig& HttpBackend::config_for(Role role) const {
  auto it = roles_.find(role);
  if (it == roles_.end()) throw ConfigError("no endpoint configured for role " + role_name(role));
  return it->second;
}

HttpResponse HttpBackend::post_with_retry(const RoleConfig& cfg, const std::string& path,
                                          const std::string& body) {
  auto headers = auth_headers(cfg);
  for (int attempt = 0; attempt <= retry_.max_retries; ++attempt) {
    if (attempt > 0 && retry_.base_delay_ms > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(retry_.base_delay_ms << (attempt - 1)));
    }
    auto res = transport_(cfg.endpoint, path, body, headers);
    if (!res || res->status == 429 || res->status >= 500) continue;  // transient
    return *res;
  }
  throw BackendError("transport failed after " + std::to_string(retry_.max_retries + 1) +
                     " attempts: " + cfg.endpoint + path);
}

GenerationResult HttpBackend::generate(Role role, const std::string& prompt,
                                       const std::optional<std::string>& image_ref,
                                       const SamplingParams& params) {
  const RoleConfig& cfg = config_for(role);

  json content = json::array({json{{"type", "text"}, {"text", prompt}}});
  if (image_ref) {
    content.push_back(json{{"type", "image_url"}, {"image_url", {{"url", *image_ref}}}});
  }
  json request = {
      {"model", cfg.model_name},
      {"messages", json::array({json{{"role", "user"}, {"content", content}}})},
      {"temperature", params.temperature},
      {"top_p", params.top_p},
      {"max_tokens", params.max_tokens},
      {"seed", params.seed},
      {"logprobs", true},
  };
  // Vendor extension; not part of the standard chat-completions schema.
  if (params.top_k > 0) request["top_k"] = params.top_k;

  HttpResponse res = post_with_retry(cfg, "/chat/completions", request.dump());
  if (res.status != 200) {
    throw BackendError("endpoint returned status " + std::to_string(res.status) + ": " +
                       res.body.substr(0, 512));
  }
  json j = json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.contains("choices") || j["choices"].empty()) {
    throw ProtocolError("malformed chat-completions response");
  }
  const json& choice = j["choices"][0];
  GenerationResult result;
  result.text = choice.at("message").at("content").get<std::string>();
  result.finish_reason = choice.value("finish_reason", "stop");
  if (!choice.contains("logprobs") || choice["logprobs"].is_null()) {
    throw CapabilityError("endpoint did not return logprobs: " + cfg.endpoint);
  }
  std::string reconstructed;
  for (const auto& entry : choice["logprobs"].at("content")) {
    double lp = entry.at("logprob").get<double>();
    if (lp > 0) throw ProtocolError("endpoint returned positive logprob");
    result.token_logprobs.push_back({entry.at("token").get<std::string>(), lp});
    reconstructed += entry.at("token").get<std::string>();
  }
  result.detokenization_exact = reconstructed == result.text;
  return result;
}

std::vector<TokenLogprob> HttpBackend::score(Role role, const std::string& prompt,
                                             const std::optional<std::string>& /*image_ref*/,
                                             const std::string& completion) {
  if (completion.empty()) return {};
  const RoleConfig& cfg = config_for(role);
  json request = {
      {"model", cfg.model_name}, {"prompt", prompt + completion}, {"echo", true},
      {"max_tokens", 0},         {"logprobs", 1},
  };
  HttpResponse res = post_with_retry(cfg, "/completions", request.dump());
  if (res.status == 404) {
    throw CapabilityError("endpoint cannot score completions: " + cfg.endpoint);
  }
  if (res.status != 200) {
    throw BackendError("endpoint returned status " + std::to_string(res.status) + ": " +
                       res.body.substr(0, 512));
  }
  json j = json::parse(res.body, nullptr, false);
  if (j.is_discarded() || !j.contains("choices") || j["choices"].empty() ||
      !j["choices"][0].contains("logprobs")) {
    throw CapabilityError("scoring response lacks logprobs");
  }
  const json& lp = j["choices"][0]["logprobs"];
  const auto& tokens = lp.at("tokens");
  const auto& logprobs = lp.at("token_logprobs");
  const auto& offsets = lp.at("text_offset");
  if (tokens.size() != logprobs.size() || tokens.size() != offsets.size()) {
    throw ProtocolError("scoring arrays have mismatched lengths");
  }
  std::vector<TokenLogprob> out;
  std::string reconstructed;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (offsets[i].get<std::size_t>() < prompt.size()) continue;  // prompt tokens excluded
    double value = logprobs[i].is_null() ? 0.0 : logprobs[i].get<double>();
    out.push_back({tokens[i].get<std::string>(), value});
    reconstructed += tokens[i].get<std::string>();
  }
  if (reconstructed != completion) {
    throw ProtocolError("scored tokens do not reconstruct the completion");
  }
  return out;
}

}  // namespace hind
