# Copyright 2026 The EvoEmo Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import evoemo


def setup_module():
  evoemo.set_offline(True)


def test_schedule_temperature():
  assert evoemo.schedule_temperature(1.0, 0.1, 0) == pytest.approx(1.0)
  assert evoemo.schedule_temperature(1.0, 0.1, 10) == pytest.approx(0.9**10)
  assert evoemo.schedule_temperature(1.0, 0.5, 10) == pytest.approx(0.1)


def test_rewards():
  assert evoemo.savings(100.0, 80.0) == pytest.approx(0.2)
  assert evoemo.ratio_reward(0.2, 4) == pytest.approx(0.05)
  assert evoemo.weighted_reward(0.2, 3, 1.0, 1.0, 30) == pytest.approx(0.1)
  assert evoemo.weighted_reward(0.05, 30, 1.0, 1.0, 30) == 0.0


def test_selection_probabilities():
  assert evoemo.selection_probabilities([1.0, 1.0], 1.0) == pytest.approx([0.5, 0.5])
  p = evoemo.selection_probabilities([0.0, math.log(2.0)], 1.0)
  assert p == pytest.approx([1 / 3, 2 / 3])


def test_policy_operators():
  a = evoemo.random_policy(1, 1)
  b = evoemo.random_policy(2, 2)
  assert len(a["matrix"]) == 7
  for row in a["matrix"]:
    assert sum(row) == pytest.approx(1.0)
  x, y = evoemo.crossover(a, b, 0.0, 7)
  assert x["matrix"] == a["matrix"] and y["matrix"] == b["matrix"]
  m = evoemo.mutate(a, 1.0, 9)
  for row in m["matrix"]:
    assert sum(row) == pytest.approx(1.0)
    assert min(row) >= 0.0


def test_run_episode_is_deterministic():
  scenario = evoemo.load_scenarios()[0]
  first = evoemo.run_episode(scenario, emotion="sadness", seed=5)
  second = evoemo.run_episode(scenario, emotion="sadness", seed=5)
  assert first == second
  assert first["outcome"]["status"] in ("accepted", "breakdown", "timeout")
  assert all(s["emotion"] == "sadness" for s in first["trajectory"])


def test_experiment_and_report(tmp_path):
  config = {
      "arm": "evoemo",
      "scenario_ids": ["desk-lamp", "laptop"],
      "repetitions": 2,
      "evolution": {"population_size": 4, "max_generations": 2},
      "output_dir": str(tmp_path),
  }
  metrics = evoemo.run_experiment(config)
  assert metrics["arm"] == "evoemo"
  assert metrics["n"] == 4
  table, summary = evoemo.report(tmp_path)
  assert table.startswith("arm,n,success_rate")
  assert summary["arms"][0]["arm"] == "evoemo"
  assert evoemo.network_requests() == 0


def test_report_missing_artifacts(tmp_path):
  with pytest.raises(evoemo.Error):
    evoemo.report(tmp_path)


def test_ablation_csv():
  csv = evoemo.run_ablation(
      "iterations",
      {"scenario_ids": ["desk-lamp"], "repetitions": 1,
       "evolution": {"population_size": 4}})
  lines = csv.strip().splitlines()
  assert lines[0].startswith("Iteration,")
  assert [l.split(",")[0] for l in lines[1:]] == ["1", "3", "5", "10"]
