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

#include <chrono>
#include <memory>

#include "doctest.h"
#include "evoemo/errors.h"
#include "evoemo/negotiation.h"
#include "evoemo/serialization.h"
#include "test_util.h"

namespace evoemo {
namespace {

RetryPolicy NoSleep() {
  RetryPolicy retry;
  retry.sleep = [](std::chrono::milliseconds) {};
  return retry;
}

AgentConfig LlmConfig(Role role) {
  AgentConfig config;
  config.backend = Backend::kLlm;
  config.role = role;
  config.model_name = "gpt-4o-mini";
  config.prompt_template_id = std::string(RoleLabel(role));
  return config;
}

std::string Fixture(const std::string& name) {
  return testing::DataPath("fixtures/llm/" + name + ".json");
}

std::string Content(const std::string& text) {
  Json body{{"choices", Json::array({Json{{"message", {{"role", "assistant"},
                                                       {"content", text}}}}})}};
  return body.dump();
}

TEST_CASE("structured trailer parsing") {
  AgentReply r = ParseStructuredReply("How about this?\nOFFER=47.50");
  CHECK(r.offer == 47.5);
  CHECK(r.message == "How about this?");
  r = ParseStructuredReply("I accept your offer.\nACCEPT\n");
  CHECK(r.accept);
  CHECK_FALSE(r.offer.has_value());
  CHECK(ParseStructuredReply("Bye.\nWALKAWAY").walk_away);
  r = ParseStructuredReply("Tell me more.\nNONE");
  CHECK_FALSE(r.offer.has_value());
  CHECK_FALSE(r.accept);
  CHECK_THROWS_AS(ParseStructuredReply("No trailer here"), ParseError);
  CHECK_THROWS_AS(ParseStructuredReply("OFFER=abc"), ParseError);
  CHECK_THROWS_AS(ParseStructuredReply("OFFER=-5"), ParseError);
  CHECK(TrailerFor(AgentReply{.accept = true}) == "ACCEPT");
}

TEST_CASE("mediator status parsing") {
  CHECK(ParseMediatorReply("They agreed.\nSTATUS=accepted") == Classification::kAccepted);
  CHECK(ParseMediatorReply("STATUS=breakdown") == Classification::kBreakdown);
  CHECK(ParseMediatorReply("Still going\nSTATUS=ongoing") == Classification::kOngoing);
  CHECK_THROWS_AS(ParseMediatorReply("STATUS=maybe"), ParseError);
}

TEST_CASE("chat wire format") {
  CHECK(ChatResponseContent(Content("hello")) == "hello");
  CHECK_THROWS_AS(ChatResponseContent("{}"), ParseError);
  CHECK_THROWS_AS(ChatResponseContent("not json"), ParseError);
  const Json body = Json::parse(ChatRequestBody(
      ChatRequest{.model = "m", .messages = {{"user", "hi"}}, .temperature = 0.5}));
  CHECK(body["model"] == "m");
  CHECK(body["temperature"] == 0.5);
  CHECK(body["messages"][0]["content"] == "hi");
}

TEST_CASE("template rendering") {
  CHECK(RenderTemplate("Buy {title} now", {{"title", "a lamp"}}) == "Buy a lamp now");
  CHECK_THROWS_AS(RenderTemplate("Buy {thing}", {{"title", "x"}}), ConfigError);
  for (const char* role : {"seller", "buyer", "mediator"}) {
    CHECK_FALSE(LoadPromptTemplate(DefaultPromptDir(), role).empty());
  }
  CHECK_THROWS(LoadPromptTemplate(DefaultPromptDir(), "nobody"));
}

TEST_CASE("emotion directive") {
  CHECK(EmotionDirective(std::nullopt).empty());
  CHECK(EmotionDirective(Emotion::kAnger).find("anger") != std::string::npos);
}

TEST_CASE("credential variables") {
  CHECK(ApiKeyVariable("openai") == "OPENAI_API_KEY");
  CHECK(BaseUrlVariable("openai") == "OPENAI_BASE_URL");
}

TEST_CASE("seller opening from a recorded response") {
  auto transport = std::make_shared<FixtureTransport>(
      FixtureTransport::FromFile(Fixture("parse")));
  LlmAgent seller(LlmConfig(Role::kSeller), transport,
                  LoadPromptTemplate(DefaultPromptDir(), "seller"), NoSleep());
  const Scenario s = testing::MakeScenario("lamp", 50, 30, 40);
  const Transcript transcript{.scenario_id = "lamp"};
  const NegotiationState state;
  Rng rng(1);
  const AgentReply reply = seller.Reply(
      TurnRequest{.scenario = s, .transcript = transcript, .state = state}, rng);
  CHECK(reply.offer == s.list_price);
  REQUIRE(transport->requests().size() == 1);
  CHECK(transport->requests()[0].model == "gpt-4o-mini");
}

TEST_CASE("reply without a trailer surfaces a transport error") {
  FixtureTransport transport = FixtureTransport::FromFile(Fixture("missing_trailer"));
  const Scenario s = testing::MakeScenario("lamp", 50, 30, 40);
  const Transcript transcript{.scenario_id = "lamp"};
  const NegotiationState state;
  CHECK_THROWS_AS(LlmReply(LlmConfig(Role::kSeller), transport, NoSleep(),
                           "Sell {title}.",
                           TurnRequest{.scenario = s, .transcript = transcript,
                                       .state = state}),
                  TransportError);
  CHECK(transport.requests().size() == 2);
}

TEST_CASE("retries back off exponentially") {
  FixtureTransport transport = FixtureTransport::FromFile(Fixture("retry"));
  std::vector<std::chrono::milliseconds> sleeps;
  RetryPolicy retry;
  retry.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  CHECK(ParseStructuredReply(CompleteWithRetry(transport, ChatRequest{.model = "m"}, retry))
            .offer == 47.5);
  REQUIRE(sleeps.size() == 2);
  CHECK(sleeps[0].count() == 500);
  CHECK(sleeps[1].count() == 1000);
}

TEST_CASE("exhausted retries abort the episode") {
  auto transport = std::make_shared<FixtureTransport>(
      FixtureTransport::FromFile(Fixture("abort")));
  LlmAgent seller(LlmConfig(Role::kSeller), transport,
                  LoadPromptTemplate(DefaultPromptDir(), "seller"), NoSleep());
  ScriptedBuyer buyer(ScriptedParams::DefaultBuyer());
  RuleMediator mediator;
  CHECK_THROWS_AS(RunEpisode(testing::MakeScenario("lamp", 50, 30, 40), buyer, seller,
                             mediator, EmotionPlan::None(), 30, 1),
                  TransportError);
  CHECK(transport->requests().size() == 3);
}

TEST_CASE("client errors are not retried") {
  FixtureTransport transport({{400, "bad request"}, {200, Content("x\nNONE")}});
  CHECK_THROWS_AS(CompleteWithRetry(transport, ChatRequest{.model = "m"}, NoSleep()),
                  TransportError);
  CHECK(transport.requests().size() == 1);
}

TEST_CASE("offline mode refuses live requests") {
  const bool before = HttpChatTransport::offline();
  HttpChatTransport::SetOffline(true);
  HttpChatTransport live("https://api.openai.com/v1", "sk-test");
  CHECK_THROWS_AS(live.Post(ChatRequest{.model = "m", .messages = {{"user", "hi"}}}),
                  TransportError);
  CHECK(HttpChatTransport::network_requests() == 0);
  HttpChatTransport::SetOffline(before);
}

}  // namespace
}  // namespace evoemo
