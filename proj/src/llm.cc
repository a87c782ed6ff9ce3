// Copyright 2026 The EvoEmo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "evoemo/llm.h"

#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "httplib.h"

#include "evoemo/errors.h"
#include "evoemo/serialization.h"

#ifndef EVOEMO_DEFAULT_PROMPT_DIR
#define EVOEMO_DEFAULT_PROMPT_DIR "prompts"
#endif

namespace evoemo {
namespace {

std::atomic<bool> g_offline{false};
std::atomic<int> g_network_requests{0};

bool OfflineFromEnvironment() {
  const char* v = std::getenv("EVOEMO_OFFLINE");
  return v != nullptr && std::string_view(v) == "1";
}

bool Retryable(int status) { return status == 0 || status == 429 || status >= 500; }

std::string Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string Money(double amount) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", amount);
  return buf;
}

std::string Upper(std::string_view s) {
  std::string out;
  for (char c : s) {
    out += std::isalnum(static_cast<unsigned char>(c))
               ? static_cast<char>(std::toupper(static_cast<unsigned char>(c)))
               : '_';
  }
  return out;
}

std::string SystemPrompt(Role role) {
  switch (role) {
    case Role::kBuyer:
      return "You are the buyer in a price negotiation.";
    case Role::kSeller:
      return "You are the seller in a price negotiation.";
    case Role::kMediator:
      break;
  }
  return "You monitor a price negotiation between a buyer and a seller.";
}

}  // namespace

std::string ChatRequestBody(const ChatRequest& request) {
  Json messages = Json::array();
  for (const ChatMessage& m : request.messages) {
    messages.push_back(Json{{"role", m.role}, {"content", m.content}});
  }
  return Json{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature}}
      .dump();
}

std::string ChatResponseContent(std::string_view body) {
  try {
    const Json doc = Json::parse(body);
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed chat completion response: ") + e.what());
  }
}

HttpChatTransport::HttpChatTransport(std::string base_url, std::string api_key,
                                     std::chrono::seconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {}

void HttpChatTransport::SetOffline(bool offline) { g_offline = offline; }

bool HttpChatTransport::offline() { return g_offline || OfflineFromEnvironment(); }

int HttpChatTransport::network_requests() { return g_network_requests; }

ChatResponse HttpChatTransport::Post(const ChatRequest& request) {
  if (offline()) throw TransportError("network access is disabled (offline mode)");
  const size_t scheme_end = base_url_.find("://");
  const size_t path_start =
      base_url_.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  const std::string host = base_url_.substr(0, path_start);
  const std::string prefix =
      path_start == std::string::npos ? "" : base_url_.substr(path_start);

  httplib::Client client(host);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_bearer_token_auth(api_key_);
  ++g_network_requests;
  const httplib::Result result = client.Post(prefix + "/chat/completions",
                                             ChatRequestBody(request),
                                             "application/json");
  if (!result) return {0, httplib::to_string(result.error())};
  return {result->status, result->body};
}

FixtureTransport::FixtureTransport(std::vector<ChatResponse> responses)
    : responses_(std::move(responses)) {}

FixtureTransport FixtureTransport::FromFile(const std::string& path) {
  const Json doc = Json::parse(ReadFile(path));
  std::vector<ChatResponse> responses;
  for (const Json& r : doc.at("responses")) {
    const Json& body = r.at("body");
    responses.push_back(
        {r.at("status").get<int>(), body.is_string() ? body.get<std::string>() : body.dump()});
  }
  return FixtureTransport(std::move(responses));
}

ChatResponse FixtureTransport::Post(const ChatRequest& request) {
  requests_.push_back(request);
  if (next_ >= responses_.size()) {
    throw TransportError("fixture exhausted after " +
                         std::to_string(responses_.size()) + " responses");
  }
  return responses_[next_++];
}

std::string CompleteWithRetry(ChatTransport& transport, const ChatRequest& request,
                              const RetryPolicy& retry) {
  std::chrono::milliseconds backoff = retry.initial_backoff;
  ChatResponse response;
  for (int attempt = 0;; ++attempt) {
    response = transport.Post(request);
    if (response.status >= 200 && response.status < 300) {
      try {
        return ChatResponseContent(response.body);
      } catch (const ParseError& e) {
        throw TransportError(e.what());
      }
    }
    if (!Retryable(response.status) || attempt >= retry.max_retries) break;
    if (retry.sleep) {
      retry.sleep(backoff);
    } else {
      std::this_thread::sleep_for(backoff);
    }
    backoff = std::chrono::milliseconds(
        static_cast<int64_t>(backoff.count() * retry.backoff_multiplier));
  }
  throw TransportError("chat completion failed with status " +
                       std::to_string(response.status) + " after " +
                       std::to_string(retry.max_retries) + " retries");
}

std::string RenderTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string>& values) {
  std::string out;
  size_t i = 0;
  while (i < tmpl.size()) {
    const size_t open = tmpl.find('{', i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      throw ConfigError("unterminated placeholder in prompt template");
    }
    const std::string name(tmpl.substr(open + 1, close - open - 1));
    const auto it = values.find(name);
    if (it == values.end()) {
      throw ConfigError("unknown prompt placeholder {" + name + "}");
    }
    out += it->second;
    i = close + 1;
  }
  return out;
}

std::string DefaultPromptDir() {
  if (const char* dir = std::getenv("EVOEMO_PROMPT_DIR")) return dir;
  return EVOEMO_DEFAULT_PROMPT_DIR;
}

std::string LoadPromptTemplate(const std::string& dir, const std::string& template_id) {
  const std::filesystem::path path = std::filesystem::path(dir) / (template_id + ".txt");
  if (!std::filesystem::exists(path)) {
    throw ConfigError("prompt template not found: " + path.string());
  }
  return ReadFile(path);
}

std::string TrailerFor(const AgentReply& reply) {
  if (reply.accept) return "ACCEPT";
  if (reply.walk_away) return "WALKAWAY";
  if (reply.offer) return "OFFER=" + Money(*reply.offer);
  return "NONE";
}

std::string FormatHistory(const Transcript& transcript) {
  std::string out;
  for (const Turn& turn : transcript.turns) {
    out += std::to_string(turn.index) + ". " + std::string(SpeakerLabel(turn.speaker));
    if (turn.emotion) out += " (" + std::string(EmotionLabel(*turn.emotion)) + ")";
    out += ": " + turn.message + " [" +
           TrailerFor({.offer = turn.offer, .accept = turn.accept,
                       .walk_away = turn.walk_away}) +
           "]\n";
  }
  if (out.empty()) out = "(no messages yet)\n";
  return out;
}

std::string EmotionDirective(std::optional<Emotion> emotion) {
  if (!emotion) return "";
  return "In this message, clearly express " + std::string(EmotionLabel(*emotion)) +
         " through your wording and tone, while staying on topic.";
}

AgentReply ParseStructuredReply(std::string_view text) {
  const std::string body = Trim(text);
  const size_t newline = body.rfind('\n');
  const std::string last =
      Trim(newline == std::string::npos ? body : body.substr(newline + 1));
  AgentReply reply;
  reply.message = newline == std::string::npos ? "" : Trim(body.substr(0, newline));
  if (last == "ACCEPT") {
    reply.accept = true;
  } else if (last == "WALKAWAY") {
    reply.walk_away = true;
  } else if (last == "NONE") {
  } else if (last.rfind("OFFER=", 0) == 0) {
    std::string number = last.substr(6);
    if (!number.empty() && number.front() == '$') number.erase(0, 1);
    double value = 0;
    const auto [ptr, ec] =
        std::from_chars(number.data(), number.data() + number.size(), value);
    if (ec != std::errc() || ptr != number.data() + number.size() || !(value > 0)) {
      throw ParseError("malformed offer trailer '" + last + "'");
    }
    reply.offer = value;
  } else {
    throw ParseError("reply has no structured trailer");
  }
  return reply;
}

Classification ParseMediatorReply(std::string_view text) {
  const std::string body = Trim(text);
  const size_t newline = body.rfind('\n');
  const std::string last =
      Trim(newline == std::string::npos ? body : body.substr(newline + 1));
  if (last == "STATUS=accepted") return Classification::kAccepted;
  if (last == "STATUS=breakdown") return Classification::kBreakdown;
  if (last == "STATUS=ongoing") return Classification::kOngoing;
  throw ParseError("mediator reply has no STATUS trailer");
}

std::map<std::string, std::string> PromptValues(const TurnRequest& request) {
  const Scenario& s = request.scenario;
  return {{"title", s.title},
          {"category", s.category},
          {"product_description", s.description},
          {"condition", s.condition == ItemCondition::kNew ? "new" : "used"},
          {"list_price", Money(s.list_price)},
          {"cost_price", Money(s.cost_price)},
          {"buyer_target", Money(s.buyer_target)},
          {"history", FormatHistory(request.transcript)},
          {"emotion_directive", EmotionDirective(request.emotion)}};
}

AgentReply LlmReply(const AgentConfig& config, ChatTransport& transport,
                    const RetryPolicy& retry, std::string_view prompt_template,
                    const TurnRequest& request) {
  ChatRequest chat;
  chat.model = config.model_name.value_or("");
  chat.temperature = request.temperature;
  chat.messages = {{"system", SystemPrompt(config.role)},
                   {"user", RenderTemplate(prompt_template, PromptValues(request))}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string content = CompleteWithRetry(transport, chat, retry);
    try {
      return ParseStructuredReply(content);
    } catch (const ParseError& e) {
      if (attempt == 1) {
        throw TransportError(std::string("unparseable reply after re-request: ") +
                             e.what());
      }
    }
  }
  throw TransportError("unreachable");
}

LlmAgent::LlmAgent(AgentConfig config, std::shared_ptr<ChatTransport> transport,
                   std::string prompt_template, RetryPolicy retry)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      prompt_template_(std::move(prompt_template)),
      retry_(std::move(retry)) {
  config_.Validate();
  retry_.max_retries = config_.max_retries;
}

AgentReply LlmAgent::Reply(const TurnRequest& request, Rng&) {
  // The seller's observed emotion is never injected into its prompt.
  if (config_.role == Role::kSeller) {
    const TurnRequest plain{request.scenario, request.transcript, request.state,
                            std::nullopt, request.temperature};
    return LlmReply(config_, *transport_, retry_, prompt_template_, plain);
  }
  return LlmReply(config_, *transport_, retry_, prompt_template_, request);
}

LlmMediator::LlmMediator(AgentConfig config, std::shared_ptr<ChatTransport> transport,
                         std::string prompt_template, RetryPolicy retry)
    : config_(std::move(config)),
      transport_(std::move(transport)),
      prompt_template_(std::move(prompt_template)),
      retry_(std::move(retry)) {
  config_.Validate();
  retry_.max_retries = config_.max_retries;
}

Classification LlmMediator::Classify(const Transcript& transcript,
                                     const Scenario& scenario) {
  // Structural violations are caught by the rule checks first.
  ValidateTurns(transcript.turns);
  const NegotiationState state = StateFromTurns(transcript.turns);
  const TurnRequest request{scenario, transcript, state, std::nullopt, 0.0};
  ChatRequest chat;
  chat.model = config_.model_name.value_or("");
  chat.temperature = 0.0;
  chat.messages = {{"system", SystemPrompt(Role::kMediator)},
                   {"user", RenderTemplate(prompt_template_, PromptValues(request))}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string content = CompleteWithRetry(*transport_, chat, retry_);
    try {
      return ParseMediatorReply(content);
    } catch (const ParseError& e) {
      if (attempt == 1) {
        throw TransportError(std::string("unparseable mediator reply: ") + e.what());
      }
    }
  }
  throw TransportError("unreachable");
}

std::string ApiKeyVariable(std::string_view provider) {
  return Upper(provider) + "_API_KEY";
}

std::string BaseUrlVariable(std::string_view provider) {
  return Upper(provider) + "_BASE_URL";
}

std::string DefaultBaseUrl(std::string_view provider) {
  if (provider == "openai") return "https://api.openai.com/v1";
  if (provider == "deepseek") return "https://api.deepseek.com/v1";
  if (provider == "gemini") {
    return "https://generativelanguage.googleapis.com/v1beta/openai";
  }
  return "";
}

std::shared_ptr<ChatTransport> TransportFromEnvironment(std::string_view provider) {
  const std::string key_var = ApiKeyVariable(provider);
  const char* key = std::getenv(key_var.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + key_var + " is not set");
  }
  std::string base = DefaultBaseUrl(provider);
  if (const char* override_url = std::getenv(BaseUrlVariable(provider).c_str())) {
    base = override_url;
  }
  if (base.empty()) {
    throw ConfigError("no base URL for provider '" + std::string(provider) +
                      "'; set " + BaseUrlVariable(provider));
  }
  return std::make_shared<HttpChatTransport>(base, key);
}

}  // namespace evoemo
