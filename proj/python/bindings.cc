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

// Python bindings. Structured values cross the boundary as JSON text; the
// package wrapper converts them to and from Python objects.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "evoemo/emotion_policy.h"
#include "evoemo/errors.h"
#include "evoemo/evolution.h"
#include "evoemo/harness.h"
#include "evoemo/llm.h"
#include "evoemo/negotiation.h"
#include "evoemo/reward.h"
#include "evoemo/serialization.h"

namespace py = pybind11;

namespace evoemo {
namespace {

template <typename T>
T Parse(const std::string& text) {
  return Json::parse(text).get<T>();
}

ExperimentConfig ParseConfig(const std::string& text) {
  ExperimentConfig config;
  if (!text.empty()) from_json(Json::parse(text), config);
  config.reward.t_max = config.t_max;
  return config;
}

Json RunToJson(const EvolutionRun& run) {
  Json generations = Json::array();
  for (const GenerationStats& g : run.generations) generations.push_back(g);
  return Json{{"termination", TerminationLabel(run.reason)},
              {"best_fitness", run.best_fitness},
              {"best_policy", run.best_policy},
              {"generations", std::move(generations)}};
}


std::string RunEpisodePy(const std::string& scenario_json,
                         const std::string& plan_kind, const std::string& plan_value,
                         int t_max, uint64_t seed) {
  const Scenario scenario = Parse<Scenario>(scenario_json);
  scenario.Validate();
  EmotionPlan plan = EmotionPlan::None();
  if (plan_kind == "fixed") {
    plan = EmotionPlan::Fixed(ParseEmotion(plan_value));
  } else if (plan_kind == "policy") {
    plan = EmotionPlan::FromPolicy(Parse<EmotionPolicy>(plan_value));
  } else if (plan_kind != "none") {
    throw ConfigError("plan must be none, fixed or policy");
  }
  ScriptedBuyer buyer(ScriptedParams::DefaultBuyer());
  ScriptedSeller seller(ScriptedParams::DefaultSeller());
  RuleMediator mediator;
  const Episode ep = RunEpisode(scenario, buyer, seller, mediator, plan, t_max, seed);
  Json trajectory = Json::array();
  for (const TrajectoryStep& s : ep.trajectory) {
    trajectory.push_back(Json{{"turn", s.turn},
                              {"emotion", EmotionLabel(s.emotion)},
                              {"temperature", s.temperature}});
  }
  return Json{{"transcript", ep.transcript},
              {"outcome", ep.outcome},
              {"trajectory", std::move(trajectory)}}
      .dump();
}

}  // namespace
}  // namespace evoemo

PYBIND11_MODULE(_evoemo, m) {
  using namespace evoemo;
  m.doc() = "Evolutionary emotion policies for negotiation agents";

  py::register_exception<Error>(m, "Error");

  m.def("set_offline", &HttpChatTransport::SetOffline, py::arg("offline"));
  m.def("network_requests", &HttpChatTransport::network_requests);

  m.def(
      "schedule_temperature",
      [](double tau0, double delta, int t) {
        return ScheduleTemperature(TemperatureParams{.tau0 = tau0, .delta = delta}, t);
      },
      py::arg("tau0"), py::arg("delta"), py::arg("t"));
  m.def(
      "savings",
      [](double list_price, double final_price) {
        Scenario s;
        s.id = "s";
        s.list_price = list_price;
        s.cost_price = list_price;
        s.buyer_target = list_price;
        Outcome o;
        o.status = OutcomeStatus::kAccepted;
        o.final_price = final_price;
        o.rounds = 2;
        return Savings(s, o);
      },
      py::arg("list_price"), py::arg("final_price"));
  m.def("ratio_reward", &RatioReward, py::arg("savings"), py::arg("rounds"),
        py::arg("alpha") = 1.0);
  m.def("weighted_reward", &WeightedReward, py::arg("savings"), py::arg("rounds"),
        py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("t_max") = 30);
  m.def(
      "selection_probabilities",
      [](const std::vector<double>& rewards, double lambda) {
        return SelectionProbabilities(rewards, lambda);
      },
      py::arg("rewards"), py::arg("lam"));

  m.def(
      "random_policy",
      [](uint64_t seed, uint64_t id) {
        Rng rng(seed);
        return Json(RandomPolicy(rng, id)).dump();
      },
      py::arg("seed"), py::arg("id") = 1);
  m.def(
      "crossover",
      [](const std::string& a, const std::string& b, double p_c, uint64_t seed) {
        Rng rng(seed);
        IdSource ids(1000000);
        auto [x, y] = Crossover(Parse<EmotionPolicy>(a), Parse<EmotionPolicy>(b), p_c,
                                rng, ids);
        return py::make_tuple(Json(x).dump(), Json(y).dump());
      },
      py::arg("a"), py::arg("b"), py::arg("p_c"), py::arg("seed"));
  m.def(
      "mutate",
      [](const std::string& p, double p_m, uint64_t seed) {
        Rng rng(seed);
        IdSource ids(1000000);
        return Json(Mutate(Parse<EmotionPolicy>(p), p_m, rng, ids)).dump();
      },
      py::arg("policy"), py::arg("p_m"), py::arg("seed"));

  m.def("load_scenarios", [](const std::string& path) {
    Json out = Json::array();
    for (const Scenario& s : LoadScenarios(path.empty() ? DefaultScenarioPath() : path)) {
      out.push_back(s);
    }
    return out.dump();
  });
  m.def("run_episode", &RunEpisodePy, py::arg("scenario"), py::arg("plan_kind"),
        py::arg("plan_value"), py::arg("t_max"), py::arg("seed"));

  m.def(
      "evolve",
      [](const std::string& config_json, const std::string& store_dir, bool resume) {
        ExperimentConfig config = ParseConfig(config_json);
        config.arm = Arm::kEvoEmo;
        config.Validate();
        std::optional<std::filesystem::path> dir;
        if (!store_dir.empty()) dir = store_dir;
        return RunToJson(RunEvolution(config, LoadConfiguredScenarios(config), dir, resume))
            .dump();
      },
      py::arg("config"), py::arg("store_dir") = "", py::arg("resume") = false);
  m.def("run_experiment", [](const std::string& config_json) {
    return Json(RunExperiment(ParseConfig(config_json)).metrics).dump();
  });
  m.def("run_benchmark", [](const std::string& config_json) {
    Json out = Json::array();
    for (const MetricsReport& r : RunBenchmark(ParseConfig(config_json))) out.push_back(r);
    return out.dump();
  });
  m.def("run_ablation", [](const std::string& kind, const std::string& config_json) {
    return RunAblation(ParseAblationKind(kind), ParseConfig(config_json)).ToCsv();
  });
  m.def("report", [](const std::string& run_dir, bool write) {
    const RenderedReport r = write ? WriteReport(run_dir) : Report(run_dir);
    return py::make_tuple(r.table_csv, r.summary_json);
  }, py::arg("run_dir"), py::arg("write") = true);
}
