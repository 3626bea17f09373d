"""Seeded generator of random valid DAG models for property checks."""

from __future__ import annotations

import random

from goalfuzz import FuzzyRule, TreatmentModel, build_model

WEIGHTS = [k / 20 for k in range(21)]


def random_model(
    rng: random.Random,
    *,
    max_goals: int = 12,
    max_interventions: int = 10,
    max_rules_per_goal: int = 3,
    max_rhs: int = 4,
    positive: bool = False,
    or_tree: bool = False,
) -> TreatmentModel:
    n_goals = rng.randint(1, max_goals)
    n_interventions = rng.randint(1, max_interventions)
    goals = [f"g{k}" for k in range(n_goals)]
    interventions = [f"i{k}" for k in range(1, n_interventions + 1)]
    weights = WEIGHTS[1:] if positive else WEIGHTS

    rules = []
    for j, goal in enumerate(goals):
        # edges only point to later goals, which keeps the graph acyclic
        candidates = goals[j + 1:] + interventions
        lo = 1 if j == 0 else 0
        for _ in range(rng.randint(lo, max_rules_per_goal)):
            size = 1 if or_tree else rng.randint(1, min(max_rhs, len(candidates)))
            rhs = tuple(rng.sample(candidates, size))
            rules.append((goal, rhs, rng.choice(weights)))
    rng.shuffle(rules)
    rules = [FuzzyRule(f"p{n}", lhs, rhs, w) for n, (lhs, rhs, w) in enumerate(rules, 1)]
    return build_model("g0", rules, goals, interventions)


def corpus(n: int = 250, seed: int = 20240601, **kwargs) -> list[TreatmentModel]:
    rng = random.Random(seed)
    return [random_model(rng, **kwargs) for _ in range(n)]
