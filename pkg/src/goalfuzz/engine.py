"""Impact analysis by max-min composition and what-if goal satisfaction.

The impact of goal ``g`` on symbol ``v`` is the strongest derivation chain
from ``g`` to ``v``, where a chain is as strong as its weakest rule. On a DAG
this is a widest-path problem and one reverse-topological sweep per target
suffices::

    impact(v, v) = 1
    impact(g, v) = max over edges (g -> c, w) of min(w, impact(c, v))

:func:`enumerate_chains` walks every chain explicitly and exists as an
independent cross-check of the sweep.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterator, Mapping

from . import errors
from .model import ChildEdge, TreatmentModel, get_rule, require_goal, symbol_sort_key

SatisfactionAssignment = Mapping[str, float]


@dataclasses.dataclass(frozen=True)
class DerivationChain:
    symbols: tuple[str, ...]
    rule_ids: tuple[str, ...]
    membership: float | None = None

    def __str__(self) -> str:
        return " -> ".join(self.symbols)


@dataclasses.dataclass(frozen=True)
class ImpactMatrix:
    """Impact of every goal on every intervention of one model.

    Pairs with no connecting chain hold 0. ``goals`` is root-first then
    natural order; ``interventions`` is natural order.
    """

    fingerprint: str
    goals: tuple[str, ...]
    interventions: tuple[str, ...]
    values: Mapping[tuple[str, str], float]

    def __getitem__(self, pair: tuple[str, str]) -> float:
        return self.values[pair]

    def row(self, goal: str) -> list[float]:
        return [self.values[goal, v] for v in self.interventions]

    def column(self, intervention: str) -> list[float]:
        return [self.values[g, intervention] for g in self.goals]


def _check_symbol(model: TreatmentModel, symbol: str) -> None:
    if symbol not in model.symbols:
        raise errors.UnknownSymbolError(f"unknown symbol {symbol!r}", subject=symbol)


def impacts_to(model: TreatmentModel, target: str) -> dict[str, float]:
    """Impact of every symbol of ``model`` on ``target`` in one sweep."""
    _check_symbol(model, target)
    best: dict[str, float] = {}
    edges = model._edges
    for symbol in reversed(model.topological_order):
        if symbol == target:
            best[symbol] = 1.0
        elif symbol in edges:
            best[symbol] = max(
                (min(e.membership, best[e.child]) for e in edges[symbol]), default=0.0
            )
        else:
            best[symbol] = 0.0
    return best


def impact(model: TreatmentModel, source: str, target: str) -> float:
    """Strongest chain membership from goal ``source`` to ``target``."""
    _check_symbol(model, source)
    require_goal(model, source)
    return impacts_to(model, target)[source]


def impact_matrix(model: TreatmentModel) -> ImpactMatrix:
    goals = tuple(model.ordered_goals())
    interventions = tuple(model.ordered_interventions())
    values: dict[tuple[str, str], float] = {}
    for v in interventions:
        column = impacts_to(model, v)
        for g in goals:
            values[g, v] = column[g]
    return ImpactMatrix(model.fingerprint, goals, interventions, values)


def chain_membership(model: TreatmentModel, chain: DerivationChain) -> float:
    """Weakest rule along ``chain``; raises if a step is not backed by its rule."""
    if len(chain.symbols) != len(chain.rule_ids) + 1 or not chain.rule_ids:
        raise errors.InvalidChainError(
            f"chain of {len(chain.symbols)} symbols needs {len(chain.symbols) - 1} rule ids"
        )
    weakest = 1.0
    for parent, child, rule_id in zip(chain.symbols, chain.symbols[1:], chain.rule_ids):
        try:
            rule = get_rule(model, rule_id)
        except errors.UnknownRuleError as exc:
            raise errors.InvalidChainError(str(exc), subject=rule_id) from None
        if rule.lhs != parent or child not in rule.rhs:
            raise errors.InvalidChainError(
                f"rule {rule_id} does not derive {child!r} from {parent!r}", subject=rule_id
            )
        weakest = min(weakest, rule.membership)
    return weakest


def _walk(
    model: TreatmentModel, node: str, target: str, symbols: list[str], rules: list[str]
) -> Iterator[DerivationChain]:
    for edge in model._edges.get(node, ()):
        if edge.child in symbols:
            continue
        symbols.append(edge.child)
        rules.append(edge.rule_id)
        if edge.child == target:
            weakest = min(get_rule(model, r).membership for r in rules)
            yield DerivationChain(tuple(symbols), tuple(rules), weakest)
        else:
            yield from _walk(model, edge.child, target, symbols, rules)
        symbols.pop()
        rules.pop()


def enumerate_chains(model: TreatmentModel, source: str, target: str) -> list[DerivationChain]:
    """Every simple chain from ``source`` to ``target``, depth-first.

    Exponential in the worst case. Chains have at least one step, so
    ``source == target`` yields nothing.
    """
    _check_symbol(model, source)
    _check_symbol(model, target)
    return list(_walk(model, source, target, [source], []))


def explain_impact(
    model: TreatmentModel, source: str, target: str
) -> tuple[DerivationChain, str] | None:
    """A chain attaining ``impact(source, target)`` and its weakest rule.

    Among optimal chains the one with the smallest symbol sequence (natural
    order) is chosen, walking rules in stored order at each step; the
    bottleneck is the earliest rule on it with the minimum membership.
    Returns None when no chain exists, including ``source == target``.
    """
    _check_symbol(model, source)
    require_goal(model, source)
    reach = impacts_to(model, target)
    value = reach[source]
    if source == target or value == 0:
        return None

    symbols, rule_ids, weights = [source], [], []
    node = source
    while node != target:
        candidates: list[ChildEdge] = [
            e for e in model._edges[node] if e.membership >= value and reach[e.child] >= value
        ]
        step = min(candidates, key=lambda e: symbol_sort_key(e.child))
        symbols.append(step.child)
        rule_ids.append(step.rule_id)
        weights.append(step.membership)
        node = step.child

    chain = DerivationChain(tuple(symbols), tuple(rule_ids), min(weights))
    return chain, rule_ids[weights.index(min(weights))]


def satisfaction(model: TreatmentModel, assignment: SatisfactionAssignment) -> dict[str, float]:
    """Propagate intervention employment degrees up to every goal.

    A rule is satisfied to the weakest of its membership and its AND-set;
    a goal takes its best rule. Goals without rules and unmentioned
    interventions sit at 0.
    """
    for name, degree in assignment.items():
        if name not in model.interventions:
            raise errors.UnknownInterventionError(
                f"{name!r} is not an intervention of the model", subject=name
            )
        if not 0.0 <= degree <= 1.0:
            raise errors.DegreeOutOfRangeError(
                f"degree {degree!r} for {name!r} is outside [0, 1]", subject=name
            )

    sat: dict[str, float] = {v: float(assignment.get(v, 0.0)) for v in model.interventions}
    by_lhs = model.rules_by_lhs
    for symbol in reversed(model.topological_order):
        if symbol in model.goals:
            sat[symbol] = max(
                (min(rule.membership, *(sat[r] for r in rule.rhs)) for rule in by_lhs[symbol]),
                default=0.0,
            )
    return {g: sat[g] for g in model.ordered_goals()}
