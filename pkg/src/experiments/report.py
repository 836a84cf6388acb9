"""
Experiment results and acceptance rules.

Frequencies carry the binomial standard error sqrt(p(1-p)/R) and are judged
with a three standard error band.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

PASS = 'PASS'
FAIL = 'FAIL'
INFO = 'INFO'

SE_BAND = 3.0

RULE_AT_MOST = 'frequency <= bound + 3 SE'
RULE_AT_LEAST = 'frequency >= floor - 3 SE'
RULE_SLOPE = '|slope - target| <= tolerance'
RULE_ZERO = 'no violation'
RULE_VANISHING = 'all median errors below 1e-12'
RULE_INCREASING = 'strictly increasing'
RULE_RELATIVE = 'relative difference <= 0.2'
RULE_NON_VANISHING = 'ratio stays above half its first value'
RULE_REPORTED = 'reported only'


def binomial_se(frequency: float, replicates: int) -> float:
    return math.sqrt(max(frequency * (1.0 - frequency), 0.0) / replicates)


@dataclass
class ResultRow:
    """
    One line of a report.

    ``statistic`` names the measured quantity: frequency, slope or value.
    ``reference`` is the bound, floor or target it was judged against.
    """
    name: str
    statistic: str
    value: Optional[float]
    se: Optional[float]
    reference: Optional[float]
    verdict: str
    rule: str
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        reference_key = 'target' if self.statistic == 'slope' else 'bound'
        return {
            'name': self.name,
            self.statistic: self.value,
            'se': self.se,
            reference_key: self.reference,
            'verdict': self.verdict,
            'rule': self.rule,
            'details': self.details,
        }


def frequency_row(
    name: str,
    events: int,
    replicates: int,
    bound: float,
    kind: str = 'at_most',
    details: Optional[Dict[str, Any]] = None,
) -> ResultRow:
    """Judge an event count against an upper bound or a lower floor on its probability."""
    freq = events / replicates
    se = binomial_se(freq, replicates)
    if kind == 'at_most':
        ok, rule = freq <= bound + SE_BAND * se, RULE_AT_MOST
    else:
        ok, rule = freq >= bound - SE_BAND * se, RULE_AT_LEAST
    return ResultRow(name, 'frequency', freq, se, bound, PASS if ok else FAIL, rule, dict(details or {}))


def info_row(name: str, value: float, details: Optional[Dict[str, Any]] = None) -> ResultRow:
    return ResultRow(name, 'value', value, None, None, INFO, RULE_REPORTED, dict(details or {}))


@dataclass
class ExperimentReport:
    """Outcome of one experiment run; ``raw`` rows back the optional CSV dump."""
    experiment: str
    config: Dict[str, Any]
    seed: int
    results: List[ResultRow] = field(default_factory=list)
    runtime_seconds: Optional[float] = None
    raw: List[Tuple[str, int, float]] = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return all(row.verdict != FAIL for row in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'experiment': self.experiment,
            'config': self.config,
            'results': [row.to_dict() for row in self.results],
            'runtime_seconds': self.runtime_seconds,
            'seed': self.seed,
            'passed': self.passed,
        }
