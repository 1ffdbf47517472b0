"""Liveness and buffer dimensioning of dataflow process networks by exact LP/ILP."""

from .analyzer import DimensionResult, Method, Verdict, check_liveness, dimension, verdict_hierarchy
from .model import Blocking, Dimensioning, Network, mirror_transform, validate
from .oracle import explore
from .textio import emit_network, emit_report, parse

__version__ = "0.1.0"

__all__ = [
    "Blocking",
    "DimensionResult",
    "Dimensioning",
    "Method",
    "Network",
    "Verdict",
    "check_liveness",
    "dimension",
    "emit_network",
    "emit_report",
    "explore",
    "mirror_transform",
    "parse",
    "validate",
    "verdict_hierarchy",
]
