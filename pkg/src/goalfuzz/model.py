"""Treatment models as weighted AND/OR grammars.

A model is the tuple (root, goals, interventions, rules). Each rule rewrites
one goal into an ordered AND-set of symbols and carries a single membership
degree in [0, 1] shared by every symbol of that AND-set. Several rules with
the same left-hand side are OR-alternatives.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
import re
from collections.abc import Iterable, Iterator
from functools import cached_property
from typing import NamedTuple

from . import errors

TOKEN_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

GOAL = "goal"
INTERVENTION = "intervention"


def is_token(text: str) -> bool:
    return isinstance(text, str) and TOKEN_RE.match(text) is not None


def symbol_sort_key(name: str) -> tuple:
    """Natural ordering key so that ``i2`` sorts before ``i10``."""
    parts = re.split(r"(\d+)", name)
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p)


@dataclasses.dataclass(frozen=True)
class FuzzyRule:
    """One derivation rule ``lhs -> rhs[0] rhs[1] ... @ membership``."""

    id: str
    lhs: str
    rhs: tuple[str, ...]
    membership: float

    def __post_init__(self) -> None:
        # lists are accepted for convenience but stored as tuples for hashing
        if not isinstance(self.rhs, tuple):
            object.__setattr__(self, "rhs", tuple(self.rhs))
        if type(self.membership) is int:
            object.__setattr__(self, "membership", float(self.membership))


class ChildEdge(NamedTuple):
    child: str
    rule_id: str
    membership: float


@dataclasses.dataclass(frozen=True)
class Finding:
    code: str
    message: str
    subject: str | None = None
    path: tuple[str, ...] = ()


@dataclasses.dataclass(frozen=True)
class ValidationReport:
    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclasses.dataclass(frozen=True)
class TreatmentModel:
    """Immutable treatment model.

    Construct through :func:`build_model`, which infers symbol kinds and
    enforces the structural invariants. Equality is structural over the four
    fields; derived indexes are cached lazily and excluded from comparison.
    """

    root: str
    goals: frozenset[str]
    interventions: frozenset[str]
    rules: tuple[FuzzyRule, ...]

    @cached_property
    def symbols(self) -> frozenset[str]:
        return self.goals | self.interventions

    @cached_property
    def _rules_by_id(self) -> dict[str, FuzzyRule]:
        return {rule.id: rule for rule in self.rules}

    @cached_property
    def _edges(self) -> dict[str, tuple[ChildEdge, ...]]:
        edges: dict[str, list[ChildEdge]] = {g: [] for g in self.goals}
        for rule in self.rules:
            for child in rule.rhs:
                edges[rule.lhs].append(ChildEdge(child, rule.id, rule.membership))
        return {g: tuple(es) for g, es in edges.items()}

    @cached_property
    def rules_by_lhs(self) -> dict[str, tuple[FuzzyRule, ...]]:
        grouped: dict[str, list[FuzzyRule]] = {g: [] for g in self.goals}
        for rule in self.rules:
            grouped[rule.lhs].append(rule)
        return {g: tuple(rs) for g, rs in grouped.items()}

    @cached_property
    def topological_order(self) -> tuple[str, ...]:
        """All symbols, every goal before the symbols it derives."""
        order: list[str] = []
        done: set[str] = set()
        for start in sorted(self.symbols, key=symbol_sort_key):
            if start in done:
                continue
            stack: list[tuple[str, Iterator[ChildEdge]]] = [
                (start, iter(self._edges.get(start, ())))
            ]
            done.add(start)
            while stack:
                node, it = stack[-1]
                for edge in it:
                    if edge.child not in done:
                        done.add(edge.child)
                        stack.append((edge.child, iter(self._edges.get(edge.child, ()))))
                        break
                else:
                    stack.pop()
                    order.append(node)
        order.reverse()
        return tuple(order)

    @cached_property
    def fingerprint(self) -> str:
        payload = json.dumps(
            [
                self.root,
                sorted(self.goals),
                sorted(self.interventions),
                [[r.id, r.lhs, list(r.rhs), repr(float(r.membership))] for r in self.rules],
            ]
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def kind(self, symbol: str) -> str:
        if symbol in self.goals:
            return GOAL
        if symbol in self.interventions:
            return INTERVENTION
        raise errors.UnknownSymbolError(f"unknown symbol {symbol!r}", subject=symbol)

    def ordered_goals(self) -> list[str]:
        """Root first, remaining goals in natural order."""
        rest = sorted(self.goals - {self.root}, key=symbol_sort_key)
        return [self.root, *rest]

    def ordered_interventions(self) -> list[str]:
        return sorted(self.interventions, key=symbol_sort_key)


def _find_cycle(adjacency: dict[str, list[str]]) -> tuple[str, ...] | None:
    """Return one cycle as ``(a, b, ..., a)`` or None for a DAG."""
    white, grey, black = 0, 1, 2
    color = dict.fromkeys(adjacency, white)
    for start in sorted(adjacency, key=symbol_sort_key):
        if color[start] != white:
            continue
        path = [start]
        stack = [iter(adjacency[start])]
        color[start] = grey
        while stack:
            for nxt in stack[-1]:
                state = color.get(nxt, white)
                if state == grey:
                    cycle = path[path.index(nxt):]
                    return (*cycle, nxt)
                if state == white:
                    color[nxt] = grey
                    path.append(nxt)
                    stack.append(iter(adjacency.get(nxt, ())))
                    break
            else:
                stack.pop()
                color[path.pop()] = black
    return None


def _structural_errors(model: TreatmentModel) -> Iterator[Finding]:
    """Yield every hard-invariant breach of ``model``, most basic first."""
    for symbol in sorted({model.root, *model.goals, *model.interventions}, key=symbol_sort_key):
        if not is_token(symbol):
            yield Finding("InvalidToken", f"malformed symbol name {symbol!r}", symbol)

    seen: set[str] = set()
    for rule in model.rules:
        if not is_token(rule.id):
            yield Finding("InvalidToken", f"malformed rule id {rule.id!r}", rule.id)
        if rule.id in seen:
            yield Finding("DuplicateRuleId", f"rule id {rule.id!r} is used more than once", rule.id)
        seen.add(rule.id)

    for rule in model.rules:
        m = rule.membership
        if not isinstance(m, (int, float)) or math.isnan(m) or not 0.0 <= m <= 1.0:
            yield Finding(
                "MembershipOutOfRange",
                f"rule {rule.id} has membership {m!r} outside [0, 1]",
                rule.id,
            )
        if not rule.rhs:
            yield Finding("EmptyRhs", f"rule {rule.id} has an empty right-hand side", rule.id)

    if model.root not in model.goals:
        yield Finding("UnknownRoot", f"root {model.root!r} is not a goal of the model", model.root)

    for symbol in sorted(model.goals & model.interventions, key=symbol_sort_key):
        yield Finding(
            "KindConflict", f"{symbol!r} is both a goal and an intervention", symbol
        )
    known = model.goals | model.interventions
    for rule in model.rules:
        if rule.lhs in model.interventions:
            yield Finding(
                "KindConflict",
                f"intervention {rule.lhs!r} is the left-hand side of rule {rule.id}",
                rule.lhs,
            )
        for symbol in (rule.lhs, *rule.rhs):
            if symbol not in known:
                yield Finding(
                    "UnknownSymbol", f"rule {rule.id} references undeclared {symbol!r}", symbol
                )

    adjacency: dict[str, list[str]] = {s: [] for s in known}
    for rule in model.rules:
        adjacency.setdefault(rule.lhs, []).extend(rule.rhs)
    cycle = _find_cycle(adjacency)
    if cycle is not None:
        yield Finding("CycleDetected", "cycle " + " -> ".join(cycle), cycle[0], cycle)


def _structural_warnings(model: TreatmentModel) -> Iterator[Finding]:
    lhs = {rule.lhs for rule in model.rules}
    for goal in sorted(model.goals - lhs, key=symbol_sort_key):
        yield Finding(
            "UnsatisfiableGoal", f"goal {goal!r} has no derivation rule", goal
        )

    children: dict[str, set[str]] = {}
    for rule in model.rules:
        children.setdefault(rule.lhs, set()).update(rule.rhs)
    reached = {model.root}
    frontier = [model.root]
    while frontier:
        for child in children.get(frontier.pop(), ()):
            if child not in reached:
                reached.add(child)
                frontier.append(child)
    for symbol in sorted((model.goals | model.interventions) - reached, key=symbol_sort_key):
        yield Finding("Unreachable", f"{symbol!r} is not reachable from root", symbol)

    for rule in model.rules:
        if rule.membership == 0:
            yield Finding("ZeroMembership", f"rule {rule.id} has membership 0", rule.id)


_ERROR_TYPES: dict[str, type[errors.ModelError]] = {
    cls.code: cls
    for cls in (
        errors.InvalidTokenError,
        errors.EmptyRhsError,
        errors.DuplicateRuleIdError,
        errors.MembershipOutOfRangeError,
        errors.UnknownRootError,
        errors.KindConflictError,
        errors.UnknownSymbolError,
    )
}


def _raise_finding(finding: Finding) -> None:
    if finding.code == "CycleDetected":
        raise errors.CycleDetectedError(
            finding.message, cycle=finding.path, subject=finding.subject
        )
    raise _ERROR_TYPES[finding.code](finding.message, subject=finding.subject)


def build_model(
    root: str,
    rules: Iterable[FuzzyRule],
    declared_goals: Iterable[str] | None = None,
    declared_interventions: Iterable[str] | None = None,
) -> TreatmentModel:
    """Assemble and check a :class:`TreatmentModel`.

    Symbols that occur as some rule's left-hand side are goals; every other
    symbol is an intervention. The root is always a goal. Declarations add
    symbols of the stated kind, and a declared intervention that shows up as
    a left-hand side raises :class:`~goalfuzz.errors.KindConflictError`.

    Raises the first structural problem found as a
    :class:`~goalfuzz.errors.ModelError` subclass.
    """
    rules = tuple(rules)
    if not is_token(root):
        raise errors.InvalidTokenError(f"malformed root name {root!r}", subject=root)
    if not rules:
        raise errors.EmptyModelError("a model needs at least one rule")

    declared_goals = set(declared_goals or ())
    declared_interventions = set(declared_interventions or ())

    mentioned = declared_goals | declared_interventions
    for rule in rules:
        mentioned.add(rule.lhs)
        mentioned.update(rule.rhs)
    if root not in mentioned:
        raise errors.UnknownRootError(
            f"root {root!r} does not occur in any rule or declaration", subject=root
        )

    goals = {rule.lhs for rule in rules} | declared_goals | {root}
    interventions = (mentioned - goals) | declared_interventions

    model = TreatmentModel(
        root=root,
        goals=frozenset(goals),
        interventions=frozenset(interventions),
        rules=rules,
    )
    for finding in _structural_errors(model):
        _raise_finding(finding)
    return model


def validate(model: TreatmentModel) -> ValidationReport:
    errs = tuple(_structural_errors(model))
    # reachability and rule indexes are meaningless on a broken model
    warns = tuple(_structural_warnings(model)) if not errs else ()
    return ValidationReport(errors=errs, warnings=warns)


def rule_membership(model: TreatmentModel, rule_id: str) -> float:
    try:
        return model._rules_by_id[rule_id].membership
    except KeyError:
        raise errors.UnknownRuleError(f"unknown rule {rule_id!r}", subject=rule_id) from None


def get_rule(model: TreatmentModel, rule_id: str) -> FuzzyRule:
    try:
        return model._rules_by_id[rule_id]
    except KeyError:
        raise errors.UnknownRuleError(f"unknown rule {rule_id!r}", subject=rule_id) from None


def require_goal(model: TreatmentModel, symbol: str) -> None:
    if model.kind(symbol) != GOAL:
        raise errors.NotAGoalError(f"{symbol!r} is an intervention, not a goal", subject=symbol)


def child_edges(model: TreatmentModel, goal: str) -> list[ChildEdge]:
    """Edges out of ``goal``: one per (rule, rhs symbol), in rule then rhs order."""
    require_goal(model, goal)
    return list(model._edges[goal])
