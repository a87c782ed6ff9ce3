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

#ifndef EVOEMO_LLM_H_
#define EVOEMO_LLM_H_

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evoemo/agents.h"
#include "evoemo/negotiation.h"

namespace evoemo {

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 1.0;
};

// Raw HTTP result. status 0 means the request never completed.
struct ChatResponse {
  int status = 0;
  std::string body;
};

std::string ChatRequestBody(const ChatRequest& request);
// Extracts choices[0].message.content; throws ParseError.
std::string ChatResponseContent(std::string_view body);

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual ChatResponse Post(const ChatRequest& request) = 0;
};

// POSTs to {base_url}/chat/completions with a bearer key.
class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(std::string base_url, std::string api_key,
                    std::chrono::seconds timeout = std::chrono::seconds(120));
  ChatResponse Post(const ChatRequest& request) override;

  // Process-wide switch that makes every Post fail without touching the
  // network. Also enabled by EVOEMO_OFFLINE=1.
  static void SetOffline(bool offline);
  static bool offline();
  // Number of requests that reached the socket layer.
  static int network_requests();

 private:
  std::string base_url_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// Replays recorded responses in order and records every request.
class FixtureTransport : public ChatTransport {
 public:
  explicit FixtureTransport(std::vector<ChatResponse> responses);
  // Reads {"responses": [{"status": 200, "body": {...} | "..."}, ...]}.
  static FixtureTransport FromFile(const std::string& path);

  ChatResponse Post(const ChatRequest& request) override;
  const std::vector<ChatRequest>& requests() const { return requests_; }

 private:
  std::vector<ChatResponse> responses_;
  std::vector<ChatRequest> requests_;
  size_t next_ = 0;
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_multiplier = 2.0;
  // Replaced in tests to avoid sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Sends the request, retrying status 0, 429 and 5xx responses up to
// max_retries times with exponential backoff. Returns the reply content.
std::string CompleteWithRetry(ChatTransport& transport,
                              const ChatRequest& request,
                              const RetryPolicy& retry);

// Replaces {name} placeholders. Throws ConfigError on an unknown name.
std::string RenderTemplate(std::string_view tmpl,
                           const std::map<std::string, std::string>& values);

// Reads {dir}/{template_id}.txt.
std::string LoadPromptTemplate(const std::string& dir,
                               const std::string& template_id);
std::string DefaultPromptDir();

// One line per turn: "<index>. <speaker>[ (<emotion>)]: <message> [<trailer>]".
std::string FormatHistory(const Transcript& transcript);

// Directive injected into the buyer prompt; empty without an emotion.
std::string EmotionDirective(std::optional<Emotion> emotion);

// Parses the last non-empty line as OFFER=<number> | ACCEPT | WALKAWAY | NONE.
// The message is the text before that line. Throws ParseError.
AgentReply ParseStructuredReply(std::string_view text);
std::string TrailerFor(const AgentReply& reply);

// Mediator replies end with STATUS=accepted|breakdown|ongoing.
Classification ParseMediatorReply(std::string_view text);

// Placeholder values for a role's template.
std::map<std::string, std::string> PromptValues(const TurnRequest& request);

// Renders the template, calls the endpoint and parses the trailer. A reply
// without a trailer is re-requested once; a second parse failure is raised as
// TransportError.
AgentReply LlmReply(const AgentConfig& config, ChatTransport& transport,
                    const RetryPolicy& retry, std::string_view prompt_template,
                    const TurnRequest& request);

class LlmAgent : public NegotiationAgent {
 public:
  LlmAgent(AgentConfig config, std::shared_ptr<ChatTransport> transport,
           std::string prompt_template, RetryPolicy retry = {});
  AgentReply Reply(const TurnRequest& request, Rng& rng) override;

 private:
  AgentConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::string prompt_template_;
  RetryPolicy retry_;
};

class LlmMediator : public Mediator {
 public:
  LlmMediator(AgentConfig config, std::shared_ptr<ChatTransport> transport,
              std::string prompt_template, RetryPolicy retry = {});
  Classification Classify(const Transcript& transcript,
                          const Scenario& scenario) override;

 private:
  AgentConfig config_;
  std::shared_ptr<ChatTransport> transport_;
  std::string prompt_template_;
  RetryPolicy retry_;
};

// Environment variables: <PROVIDER>_API_KEY and <PROVIDER>_BASE_URL.
std::string ApiKeyVariable(std::string_view provider);
std::string BaseUrlVariable(std::string_view provider);
std::string DefaultBaseUrl(std::string_view provider);
std::shared_ptr<ChatTransport> TransportFromEnvironment(
    std::string_view provider);

}  // namespace evoemo

#endif  // EVOEMO_LLM_H_
