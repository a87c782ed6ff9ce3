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

// Command-line front end: simulate, evolve, benchmark, ablate, report.
//
// Every subcommand accepts --config with a JSON experiment document; flags
// given on the command line override the document.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "evoemo/errors.h"
#include "evoemo/harness.h"
#include "evoemo/llm.h"
#include "evoemo/serialization.h"

namespace evoemo {
namespace {

struct AgentFlags {
  std::optional<std::string> model;
  std::optional<std::string> prompt;
  std::optional<std::string> provider;
  std::optional<int> max_retries;
};

struct Flags {
  std::string config_path;
  std::optional<std::string> arm;
  std::optional<std::string> emotion;
  std::optional<std::string> scenarios;
  std::vector<std::string> scenario_ids;
  std::optional<int> t_max;
  std::optional<int> repetitions;
  std::optional<uint64_t> seed;
  std::optional<std::string> output;
  std::optional<double> temperature;
  std::optional<std::string> prompt_dir;
  std::optional<std::string> reward;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> population;
  std::optional<int> generations;
  std::optional<double> elitism;
  std::optional<double> crossover;
  std::optional<double> mutation;
  std::optional<double> lambda;
  std::optional<std::string> selection;
  std::optional<int> tournament;
  std::optional<std::string> epsilon;
  std::optional<int> patience;
  std::optional<int> episodes_per_eval;
  std::optional<uint64_t> evolution_seed;
  std::optional<std::string> seeding;
  AgentFlags buyer, seller, mediator;
  bool offline = false;
};

void AddAgentFlags(CLI::App* app, const std::string& role, AgentFlags& f) {
  app->add_option("--" + role + "-model", f.model,
                  "Chat model for the " + role + " (switches it to the llm backend)");
  app->add_option("--" + role + "-prompt", f.prompt, "Prompt template id");
  app->add_option("--" + role + "-provider", f.provider,
                  "openai, deepseek, gemini or any provider with env settings");
  app->add_option("--" + role + "-max-retries", f.max_retries);
}

void AddExperimentFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON experiment config")
      ->check(CLI::ExistingFile);
  app->add_option("--arm", f.arm, "vanilla, fixed_emotion or evoemo");
  app->add_option("--emotion", f.emotion, "Emotion of the fixed_emotion arm");
  app->add_option("--scenarios", f.scenarios, "Scenario file");
  app->add_option("--scenario-id", f.scenario_ids, "Only run these scenarios");
  app->add_option("--t-max", f.t_max, "Turn limit per dialogue");
  app->add_option("--repetitions", f.repetitions, "Episodes per scenario");
  app->add_option("--seed", f.seed, "Root seed");
  app->add_option("--output", f.output, "Run directory");
  app->add_option("--temperature", f.temperature,
                  "Fixed emotion temperature for every policy");
  app->add_option("--prompt-dir", f.prompt_dir);
  app->add_option("--reward", f.reward, "ratio or weighted");
  app->add_option("--alpha", f.alpha);
  app->add_option("--beta", f.beta, "Weighted-reward turn penalty");
  app->add_option("--population", f.population);
  app->add_option("--generations", f.generations);
  app->add_option("--elitism", f.elitism);
  app->add_option("--crossover", f.crossover);
  app->add_option("--mutation", f.mutation);
  app->add_option("--lambda", f.lambda, "Softmax selection temperature");
  app->add_option("--selection", f.selection, "softmax or tournament");
  app->add_option("--tournament-size", f.tournament);
  app->add_option("--epsilon", f.epsilon, "Convergence threshold, or inf");
  app->add_option("--patience", f.patience);
  app->add_option("--episodes-per-eval", f.episodes_per_eval);
  app->add_option("--evolution-seed", f.evolution_seed);
  app->add_option("--seeding", f.seeding, "per_policy or common");
  AddAgentFlags(app, "buyer", f.buyer);
  AddAgentFlags(app, "seller", f.seller);
  AddAgentFlags(app, "mediator", f.mediator);
  app->add_flag("--offline", f.offline, "Fail instead of making network calls");
}

template <typename T>
void Set(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

Json AgentOverlay(const AgentFlags& f, const std::string& role) {
  Json j = Json::object();
  if (f.model) {
    j["backend"] = "llm";
    j["model_name"] = *f.model;
    j["scripted_params"] = nullptr;
    j["prompt_template_id"] = f.prompt.value_or(role);
  } else if (f.prompt) {
    j["prompt_template_id"] = *f.prompt;
  }
  Set(j, "provider", f.provider);
  Set(j, "max_retries", f.max_retries);
  return j;
}

ExperimentConfig BuildConfig(const Flags& f) {
  ExperimentConfig config;
  if (!f.config_path.empty()) {
    from_json(Json::parse(ReadFile(f.config_path)), config);
  }
  Json o = Json::object();
  Set(o, "arm", f.arm);
  if (f.emotion) {
    o["fixed_emotion"] = *f.emotion;
    if (!f.arm) o["arm"] = "fixed_emotion";
  }
  Set(o, "scenario_path", f.scenarios);
  if (!f.scenario_ids.empty()) o["scenario_ids"] = f.scenario_ids;
  Set(o, "t_max", f.t_max);
  Set(o, "repetitions", f.repetitions);
  Set(o, "root_seed", f.seed);
  Set(o, "output_dir", f.output);
  Set(o, "temperature_override", f.temperature);
  Set(o, "prompt_dir", f.prompt_dir);
  Json reward = Json::object();
  Set(reward, "formulation", f.reward);
  Set(reward, "alpha", f.alpha);
  Set(reward, "weighted_beta", f.beta);
  o["reward"] = reward;
  Json evo = Json::object();
  Set(evo, "population_size", f.population);
  Set(evo, "max_generations", f.generations);
  Set(evo, "elitism_rate", f.elitism);
  Set(evo, "crossover_rate", f.crossover);
  Set(evo, "mutation_rate", f.mutation);
  Set(evo, "selection_lambda", f.lambda);
  Set(evo, "selection_mode", f.selection);
  Set(evo, "tournament_size", f.tournament);
  if (f.epsilon) {
    if (*f.epsilon == "inf") {
      evo["convergence_epsilon"] = "inf";
    } else {
      evo["convergence_epsilon"] = std::stod(*f.epsilon);
    }
  }
  Set(evo, "convergence_patience", f.patience);
  Set(evo, "episodes_per_eval", f.episodes_per_eval);
  Set(evo, "root_seed", f.evolution_seed);
  Set(evo, "seeding", f.seeding);
  o["evolution"] = evo;
  o["buyer"] = AgentOverlay(f.buyer, "buyer");
  o["seller"] = AgentOverlay(f.seller, "seller");
  o["mediator"] = AgentOverlay(f.mediator, "mediator");
  from_json(o, config);
  config.reward.t_max = config.t_max;
  if (f.offline) HttpChatTransport::SetOffline(true);
  return config;
}

void PrintTranscript(const EpisodeRecord& r) {
  std::printf("== %s  rep %d  seed %llu\n", r.scenario_id.c_str(), r.repetition,
              static_cast<unsigned long long>(r.transcript.seed));
  for (const Turn& t : r.transcript.turns) {
    std::string tag = std::string(SpeakerLabel(t.speaker));
    if (t.emotion) tag += " (" + std::string(EmotionLabel(*t.emotion)) + ")";
    std::printf("%3d %-20s %s\n", t.index, tag.c_str(), t.message.c_str());
  }
  std::printf("-> %s", std::string(OutcomeLabel(r.outcome.status)).c_str());
  if (r.outcome.final_price) std::printf(" at %.2f", *r.outcome.final_price);
  std::printf(" after %d turns\n\n", r.outcome.rounds);
}

void PrintMetrics(const std::vector<MetricsReport>& reports) {
  std::printf("%-18s %5s %9s %9s %8s %7s\n", "arm", "n", "success%", "savings%",
              "ci95", "rounds");
  for (const MetricsReport& m : reports) {
    std::printf("%-18s %5d %9.1f %9s %8.2f %7.2f\n", m.arm.c_str(), m.n,
                m.success_rate,
                m.mean_savings ? FormatFixed1(*m.mean_savings).c_str() : "NA",
                m.savings_ci95, m.mean_rounds);
  }
}

int Main(int argc, char** argv) {
  CLI::App app{"Evolutionary emotion policies for negotiation agents"};
  app.require_subcommand(1);

  Flags sim_flags, evo_flags, bench_flags, ablate_flags;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run one arm and print its transcripts");
  AddExperimentFlags(simulate, sim_flags);
  bool quiet = false;
  simulate->add_flag("--quiet", quiet, "Only print the metrics");

  CLI::App* evolve = app.add_subcommand("evolve", "Evolve an emotion policy");
  AddExperimentFlags(evolve, evo_flags);
  bool resume = false;
  evolve->add_flag("--resume", resume, "Continue from the run's checkpoint");

  CLI::App* benchmark =
      app.add_subcommand("benchmark", "Vanilla, every fixed emotion and evoemo");
  AddExperimentFlags(benchmark, bench_flags);

  CLI::App* ablate = app.add_subcommand("ablate", "Run an ablation table");
  AddExperimentFlags(ablate, ablate_flags);
  std::string ablation_kind;
  ablate
      ->add_option("kind", ablation_kind,
                   "reward_formulation, emotion_temperature or iterations")
      ->required();

  CLI::App* report = app.add_subcommand("report", "Recompute a run's metrics");
  std::string run_dir;
  report->add_option("run_dir", run_dir)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const ArmResult result = RunExperiment(BuildConfig(sim_flags));
      if (!quiet) {
        for (const EpisodeRecord& r : result.records) PrintTranscript(r);
      }
      PrintMetrics({result.metrics});
    } else if (evolve->parsed()) {
      ExperimentConfig config = BuildConfig(evo_flags);
      config.arm = Arm::kEvoEmo;
      config.Validate();
      std::optional<std::filesystem::path> dir;
      if (!config.output_dir.empty()) dir = config.output_dir;
      if (resume && !dir) throw ConfigError("--resume requires --output");
      EvolutionRun run =
          RunEvolution(config, LoadConfiguredScenarios(config), dir, resume);
      for (const GenerationStats& g : run.generations) {
        std::printf("generation %d best %.4f mean %.4f\n", g.generation,
                    g.best_reward, g.mean_reward);
      }
      std::printf("termination: %s\nbest policy:\n%s\n",
                  std::string(TerminationLabel(run.reason)).c_str(),
                  Json(run.best_policy).dump(2).c_str());
    } else if (benchmark->parsed()) {
      PrintMetrics(RunBenchmark(BuildConfig(bench_flags)));
    } else if (ablate->parsed()) {
      AblationTable table =
          RunAblation(ParseAblationKind(ablation_kind), BuildConfig(ablate_flags));
      std::cout << table.ToCsv();
    } else if (report->parsed()) {
      RenderedReport rendered = WriteReport(run_dir);
      std::cout << rendered.table_csv;
    }
  } catch (const MissingArtifactError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    for (const std::string& m : e.missing()) {
      std::fprintf(stderr, "  missing: %s\n", m.c_str());
    }
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "error: bad JSON: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace evoemo

int main(int argc, char** argv) { return evoemo::Main(argc, argv); }
