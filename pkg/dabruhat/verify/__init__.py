"""Seeded verification campaigns and their reports."""

from .report import FAIL, INCONCLUSIVE, PASS, Report, record
from .sampling import instance_rng, random_element, random_root, sample_edge, sample_triple
from .campaigns import CHECKS, Check, run_check

__all__ = [
    "CHECKS",
    "Check",
    "FAIL",
    "INCONCLUSIVE",
    "PASS",
    "Report",
    "instance_rng",
    "random_element",
    "random_root",
    "record",
    "run_check",
    "sample_edge",
    "sample_triple",
]
