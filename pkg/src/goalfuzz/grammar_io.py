"""Reading and writing ``.gotm`` model documents, plus JSON, CSV and DOT export.

Document syntax, one statement per line, ``#`` to end of line is a comment::

    root s
    goal g7, g8                  # optional kind declarations
    intervention i11
    p1: s -> g1 g2 @ 0.95        # AND-set on the right, weight after '@'

Weights are plain decimals with at most nine fractional digits.
"""

from __future__ import annotations

import dataclasses
import io
import json
import re
from decimal import Decimal

from . import errors
from .engine import ImpactMatrix
from .model import FuzzyRule, TreatmentModel, build_model, symbol_sort_key

_TOKEN_SPEC = [
    ("NUMBER", r"-?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("ARROW", r"->"),
    ("COLON", r":"),
    ("AT", r"@"),
    ("COMMA", r","),
    ("SPACE", r"[ \t]+"),
    ("OTHER", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))
_WEIGHT_RE = re.compile(r"-?\d+(?:\.\d{1,9})?\Z")
_SYMBOL_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

_DESCRIBE = {
    "NAME": "a name",
    "NUMBER": "a weight",
    "ARROW": "'->'",
    "COLON": "':'",
    "AT": "'@'",
    "COMMA": "','",
    "OTHER": "a character",
    "EOL": "end of line",
}


@dataclasses.dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    col: int


@dataclasses.dataclass
class ModelDocument:
    """Statements of a parsed document before model assembly.

    ``rule_lines`` and ``symbol_lines`` map rule ids and symbols to the line
    of their first occurrence so that model errors can be located.
    """

    root: str | None = None
    rules: list[FuzzyRule] = dataclasses.field(default_factory=list)
    goals: list[str] = dataclasses.field(default_factory=list)
    interventions: list[str] = dataclasses.field(default_factory=list)
    rule_lines: dict[str, int] = dataclasses.field(default_factory=dict)
    symbol_lines: dict[str, int] = dataclasses.field(default_factory=dict)


class _LineParser:
    def __init__(self, tokens: list[_Token], lineno: int, eol_col: int) -> None:
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.eol_col = eol_col

    def peek(self) -> _Token:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos]
        return _Token("EOL", "", self.eol_col)

    def fail(self, expected: str, token: _Token | None = None) -> errors.ModelSyntaxError:
        token = token or self.peek()
        found = "end of line" if token.kind == "EOL" else repr(token.text)
        return errors.ModelSyntaxError(
            f"expected {expected}, found {found}", self.lineno, token.col, expected
        )

    def expect(self, kind: str) -> _Token:
        token = self.peek()
        if token.kind != kind:
            raise self.fail(_DESCRIBE[kind])
        self.pos += 1
        return token

    def symbol(self) -> _Token:
        token = self.expect("NAME")
        if not _SYMBOL_RE.match(token.text):
            raise self.fail("a name starting with a letter", token)
        return token

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)


def _tokenize(line: str) -> list[_Token]:
    tokens = []
    for match in _TOKEN_RE.finditer(line):
        if match.lastgroup != "SPACE":
            tokens.append(_Token(match.lastgroup, match.group(), match.start() + 1))
    return tokens


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def parse_document(text: str) -> ModelDocument:
    """Parse statements without assembling a model.

    Raises :class:`~goalfuzz.errors.ModelSyntaxError` for malformed lines and
    reports duplicate rule ids and out-of-range weights at their line.
    """
    if text.startswith("\ufeff"):
        text = text[1:]
    lines = text.split("\n")
    doc = ModelDocument()

    for lineno, raw in enumerate(lines, start=1):
        line = _strip_comment(raw.rstrip("\r"))
        tokens = _tokenize(line)
        if not tokens:
            continue
        p = _LineParser(tokens, lineno, len(line.rstrip()) + 1)
        head = p.peek()
        if head.kind != "NAME":
            raise p.fail("a statement ('root', 'goal', 'intervention' or a rule)")
        second = tokens[1] if len(tokens) > 1 else None

        if second is not None and second.kind == "COLON":
            _parse_rule(p, doc)
        elif head.text == "root":
            p.pos += 1
            if doc.root is not None:
                raise errors.ModelSyntaxError(
                    "duplicate 'root' statement", lineno, head.col, "a single 'root' statement"
                )
            name = p.symbol()
            doc.root = name.text
            doc.symbol_lines.setdefault(name.text, lineno)
        elif head.text in ("goal", "intervention"):
            p.pos += 1
            target = doc.goals if head.text == "goal" else doc.interventions
            while True:
                name = p.symbol()
                target.append(name.text)
                doc.symbol_lines.setdefault(name.text, lineno)
                if p.at_end():
                    break
                if p.peek().kind == "COMMA":
                    p.pos += 1
        else:
            raise p.fail("':' after rule id, or a 'root'/'goal'/'intervention' keyword", second)
        if not p.at_end():
            raise p.fail("end of line")

    return doc


def _parse_rule(p: _LineParser, doc: ModelDocument) -> None:
    rule_id = p.symbol()
    p.expect("COLON")
    lhs = p.symbol()
    p.expect("ARROW")
    rhs = [p.symbol()]
    while p.peek().kind == "NAME":
        rhs.append(p.symbol())
    if p.peek().kind != "AT":
        raise p.fail("a symbol or '@'")
    p.pos += 1
    weight = p.peek()
    if weight.kind != "NUMBER" or not _WEIGHT_RE.match(weight.text):
        raise p.fail("a decimal weight with at most 9 fractional digits")
    p.pos += 1

    membership = float(weight.text)
    if not 0.0 <= membership <= 1.0:
        raise errors.MembershipOutOfRangeError(
            f"rule {rule_id.text} has membership {weight.text} outside [0, 1]",
            subject=rule_id.text,
            line=p.lineno,
            col=weight.col,
        )
    if rule_id.text in doc.rule_lines:
        raise errors.DuplicateRuleIdError(
            f"rule id {rule_id.text!r} already defined on line {doc.rule_lines[rule_id.text]}",
            subject=rule_id.text,
            line=p.lineno,
            col=rule_id.col,
        )

    doc.rules.append(FuzzyRule(rule_id.text, lhs.text, tuple(t.text for t in rhs), membership))
    doc.rule_lines[rule_id.text] = p.lineno
    for token in (lhs, *rhs):
        doc.symbol_lines.setdefault(token.text, p.lineno)


def _locate(exc: errors.ModelError, doc: ModelDocument) -> int:
    if isinstance(exc, errors.CycleDetectedError) and len(exc.cycle) > 1:
        head, nxt = exc.cycle[0], exc.cycle[1]
        for rule in doc.rules:
            if rule.lhs == head and nxt in rule.rhs:
                return doc.rule_lines[rule.id]
    if isinstance(exc, errors.KindConflictError):
        for rule in doc.rules:
            if rule.lhs == exc.subject:
                return doc.rule_lines[rule.id]
    subject = exc.subject
    if subject in doc.rule_lines:
        return doc.rule_lines[subject]
    if subject in doc.symbol_lines:
        return doc.symbol_lines[subject]
    return 1


def model_from_document(doc: ModelDocument) -> TreatmentModel:
    """Assemble a model from parsed statements, attaching line numbers to errors."""
    if doc.root is None:
        raise errors.ModelSyntaxError(
            "document has no 'root' statement", 1, 1, "a 'root <symbol>' statement"
        )
    if not doc.rules:
        raise errors.ModelSyntaxError("document has no rules", 1, 1, "at least one rule")
    try:
        return build_model(doc.root, doc.rules, doc.goals, doc.interventions)
    except errors.ModelError as exc:
        exc.line = _locate(exc, doc)
        raise


def parse_model(text: str) -> TreatmentModel:
    return model_from_document(parse_document(text))


def format_number(value: float) -> str:
    """Shortest positional decimal that reads back as ``value``; integers bare."""
    value = float(value)
    if value == int(value):
        return str(int(value))
    return format(Decimal(repr(value)), "f")


def serialize_model(model: TreatmentModel) -> str:
    """Canonical document: root, needed declarations, then rules in order.

    Declarations are emitted only for symbols whose kind the rules alone
    would not reproduce, so a plain model serializes to root plus rules.
    """
    lhs = {rule.lhs for rule in model.rules}
    in_rules = set(lhs)
    for rule in model.rules:
        in_rules.update(rule.rhs)

    out = [f"root {model.root}"]
    bare_goals = sorted(model.goals - lhs - {model.root}, key=symbol_sort_key)
    if bare_goals:
        out.append("goal " + ", ".join(bare_goals))
    bare_interventions = sorted(model.interventions - in_rules, key=symbol_sort_key)
    if bare_interventions:
        out.append("intervention " + ", ".join(bare_interventions))
    for rule in model.rules:
        out.append(
            f"{rule.id}: {rule.lhs} -> {' '.join(rule.rhs)} @ {format_number(rule.membership)}"
        )
    return "\n".join(out) + "\n"


def export_json(model: TreatmentModel, matrix: ImpactMatrix | None = None) -> str:
    if matrix is not None and matrix.fingerprint != model.fingerprint:
        raise errors.MatrixModelMismatchError("impact matrix was computed from a different model")
    doc: dict = {
        "root": model.root,
        "goals": sorted(model.goals, key=symbol_sort_key),
        "interventions": model.ordered_interventions(),
        "rules": [
            {"id": r.id, "lhs": r.lhs, "rhs": list(r.rhs), "membership": r.membership}
            for r in model.rules
        ],
    }
    if matrix is not None:
        doc["impact"] = {
            g: {v: matrix[g, v] for v in matrix.interventions} for g in matrix.goals
        }
    return json.dumps(doc, indent=2) + "\n"


def export_csv(matrix: ImpactMatrix) -> str:
    buf = io.StringIO()
    buf.write(",".join(["goal", *matrix.interventions]) + "\n")
    for g in matrix.goals:
        buf.write(",".join([g, *(format_number(x) for x in matrix.row(g))]) + "\n")
    return buf.getvalue()


def _junction_id(rule: FuzzyRule) -> str:
    # '/' cannot occur in symbol names, so junction ids never collide with them
    return f"{rule.id}/and"


def export_dot(model: TreatmentModel) -> str:
    """Graphviz digraph; AND-sets hang off a point-shaped junction node."""
    out = ["digraph treatment_model {", "  rankdir=TB;"]
    for g in model.ordered_goals():
        out.append(f'  "{g}" [shape=ellipse];')
    for v in model.ordered_interventions():
        out.append(f'  "{v}" [shape=box];')
    for rule in model.rules:
        if len(rule.rhs) > 1:
            out.append(f'  "{_junction_id(rule)}" [shape=point, xlabel="{rule.id}"];')
    for rule in model.rules:
        weight = format_number(rule.membership)
        if len(rule.rhs) == 1:
            out.append(f'  "{rule.lhs}" -> "{rule.rhs[0]}" [label="{rule.id}: {weight}"];')
            continue
        junction = _junction_id(rule)
        out.append(f'  "{rule.lhs}" -> "{junction}" [label="{rule.id}: {weight}", arrowhead=none];')
        for child in rule.rhs:
            out.append(f'  "{junction}" -> "{child}";')
    out.append("}")
    return "\n".join(out) + "\n"
