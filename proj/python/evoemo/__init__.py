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

"""Evolutionary emotion policies for multi-agent price negotiation."""

import json

from . import _evoemo
from ._evoemo import (
    Error,
    network_requests,
    ratio_reward,
    savings,
    schedule_temperature,
    selection_probabilities,
    set_offline,
    weighted_reward,
)

__all__ = [
    "Error",
    "crossover",
    "evolve",
    "load_scenarios",
    "mutate",
    "network_requests",
    "random_policy",
    "ratio_reward",
    "report",
    "run_ablation",
    "run_benchmark",
    "run_episode",
    "run_experiment",
    "savings",
    "schedule_temperature",
    "selection_probabilities",
    "set_offline",
    "weighted_reward",
]


def _dump(value):
  return "" if value is None else json.dumps(value)


def random_policy(seed, policy_id=1):
  return json.loads(_evoemo.random_policy(seed, policy_id))


def crossover(a, b, p_c, seed):
  x, y = _evoemo.crossover(json.dumps(a), json.dumps(b), p_c, seed)
  return json.loads(x), json.loads(y)


def mutate(policy, p_m, seed):
  return json.loads(_evoemo.mutate(json.dumps(policy), p_m, seed))


def load_scenarios(path=""):
  return json.loads(_evoemo.load_scenarios(path))


def run_episode(scenario, emotion=None, policy=None, t_max=30, seed=0):
  """Plays one episode with the scripted agents.

  Pass at most one of `emotion` (a fixed label) or `policy` (a dict).
  """
  if emotion is not None and policy is not None:
    raise ValueError("pass either emotion or policy")
  if policy is not None:
    kind, value = "policy", json.dumps(policy)
  elif emotion is not None:
    kind, value = "fixed", emotion
  else:
    kind, value = "none", ""
  return json.loads(
      _evoemo.run_episode(json.dumps(scenario), kind, value, t_max, seed))


def evolve(config=None, store_dir="", resume=False):
  return json.loads(_evoemo.evolve(_dump(config), str(store_dir), resume))


def run_experiment(config=None):
  return json.loads(_evoemo.run_experiment(_dump(config)))


def run_benchmark(config=None):
  return json.loads(_evoemo.run_benchmark(_dump(config)))


def run_ablation(kind, config=None):
  """Returns the ablation table as CSV text."""
  return _evoemo.run_ablation(kind, _dump(config))


def report(run_dir, write=True):
  """Returns (metrics_csv, summary_dict) recomputed from a run directory."""
  table, summary = _evoemo.report(str(run_dir), write)
  return table, json.loads(summary)
