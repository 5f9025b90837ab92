"""Numeric convergence evidence for partial sums.

Convergence of a series is only semi-decidable from finitely many terms, so
every verdict here is evidence, not proof.  A series "stabilizes" when the
partial sum moves by a small relative amount between the half horizon and the
full horizon; it "diverges" when the ratio of those two sums exceeds a
threshold.  Both thresholds are configurable per call.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

EVIDENCE_FOR = "evidence-for"
EVIDENCE_AGAINST = "evidence-against"
INCONCLUSIVE = "inconclusive"

_EPS = sys.float_info.epsilon


@dataclass(frozen=True)
class SeriesCriteria:
    """Thresholds for the stabilization and divergence tests.

    rel_change_tol: |S_full - S_half| / max(S_half, eps) below this reads as
        stabilization.  The default 0.05 is wide enough to classify slowly
        convergent power-tail series (terms ~ n**-1.2) at a horizon of 2e5.
    divergence_ratio: S_full / S_half above this reads as divergence.
    """

    rel_change_tol: float = 0.05
    divergence_ratio: float = 1.05


DEFAULT_CRITERIA = SeriesCriteria()


def series_verdict(s_half: float, s_full: float,
                   criteria: SeriesCriteria = DEFAULT_CRITERIA) -> str:
    """Classify a partial-sum pair taken at the half and full horizon."""
    if not math.isfinite(s_full) or not math.isfinite(s_half):
        return EVIDENCE_AGAINST
    rel_change = abs(s_full - s_half) / max(s_half, _EPS)
    if rel_change < criteria.rel_change_tol:
        return EVIDENCE_FOR
    if s_half > 0.0 and s_full / s_half > criteria.divergence_ratio:
        return EVIDENCE_AGAINST
    return INCONCLUSIVE
