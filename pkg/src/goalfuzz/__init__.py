"""Fuzzy AND/OR goal models: parsing, impact analysis, and what-if satisfaction."""

from importlib import resources

from .engine import (
    DerivationChain,
    ImpactMatrix,
    chain_membership,
    enumerate_chains,
    explain_impact,
    impact,
    impact_matrix,
    impacts_to,
    satisfaction,
)
from .errors import ModelError, ModelSyntaxError
from .grammar_io import (
    export_csv,
    export_dot,
    export_json,
    format_number,
    parse_model,
    serialize_model,
)
from .model import (
    ChildEdge,
    FuzzyRule,
    TreatmentModel,
    ValidationReport,
    build_model,
    child_edges,
    rule_membership,
    validate,
)


def sample_text() -> str:
    """Source of the bundled twelve-goal, ten-intervention sample model."""
    return resources.files(__package__).joinpath("data/sample.gotm").read_text("utf-8")


def load_sample() -> TreatmentModel:
    return parse_model(sample_text())


__all__ = [
    "ChildEdge",
    "DerivationChain",
    "FuzzyRule",
    "ImpactMatrix",
    "ModelError",
    "ModelSyntaxError",
    "TreatmentModel",
    "ValidationReport",
    "build_model",
    "chain_membership",
    "child_edges",
    "enumerate_chains",
    "explain_impact",
    "export_csv",
    "export_dot",
    "export_json",
    "format_number",
    "impact",
    "impact_matrix",
    "impacts_to",
    "load_sample",
    "parse_model",
    "rule_membership",
    "sample_text",
    "satisfaction",
    "serialize_model",
    "validate",
]
