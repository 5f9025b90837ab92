"""Quantitative Cauchy certification for orbits in b-metric spaces.

The relaxed triangle inequality compounds when chained: covering k points
costs a factor s**n once k <= 2**n.  From that one gets a tail bound

    d(x_n, x_{n+m}) <= M * sum_{i>=n} i**gamma * d(x_i, x_{i+1})

valid whenever gamma > log2(s), with the constant

    M = sup_n s**((n+1)*(n+2)) / 2**(gamma * n**2)  =  s**(2 + 9/(4*(alpha-1)))

where alpha = gamma * log_s(2).  A weighted gap series that stabilizes
numerically therefore certifies (as evidence) that the orbit is Cauchy.
"""
from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

from .errors import (
    DistanceDomainError,
    LengthError,
    ParameterError,
    PreconditionError,
)
from .series import (
    DEFAULT_CRITERIA,
    EVIDENCE_AGAINST,
    EVIDENCE_FOR,
    SeriesCriteria,
    series_verdict,
)
from .spaces import BMetricSpace, Point

CERTIFIED = "certified"
NOT_CERTIFIED = "not-certified"
INCONCLUSIVE = "inconclusive"

# relative slack for float comparisons that can be exactly tight
_SLACK = 1e-12


@dataclass(frozen=True)
class OrbitTrace:
    """A finite iteration record: consecutive gaps, optionally the points.

    gaps[i] is the distance between the i-th and (i+1)-th point.  When the
    points are kept, the distance evaluator rides along so checks can
    measure non-consecutive distances too.
    """

    gaps: tuple[float, ...]
    space_s: float
    points: Optional[tuple[Point, ...]] = None
    distance: Optional[Callable[[Point, Point], float]] = None

    def __post_init__(self) -> None:
        if self.space_s < 1.0:
            raise ParameterError(f"space_s must be >= 1, got {self.space_s}")
        for i, g in enumerate(self.gaps):
            if not math.isfinite(g) or g < 0.0:
                raise DistanceDomainError(f"gap[{i}] = {g!r}")
        if self.points is not None and len(self.points) != len(self.gaps) + 1:
            raise LengthError(
                f"{len(self.points)} points cannot have {len(self.gaps)} gaps")


def trace_from_points(points: Sequence[Point], space: BMetricSpace) -> OrbitTrace:
    pts = tuple(points)
    if len(pts) < 2:
        raise LengthError("need at least two points for a trace")
    gaps = tuple(space.d(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    return OrbitTrace(gaps=gaps, space_s=space.s, points=pts, distance=space.d)


def trace_from_gaps(gaps: Sequence[float], s: float) -> OrbitTrace:
    return OrbitTrace(gaps=tuple(float(g) for g in gaps), space_s=s)


@dataclass(frozen=True)
class TelescopeCheck:
    bound: float
    actual: Optional[float]
    ok: Optional[bool]


def telescope_bound_check(trace: OrbitTrace, n: int, k: int) -> TelescopeCheck:
    """Chained-triangle bound: d(x_0, x_k) <= s**n * sum of the first k gaps.

    Valid for k <= 2**n (each doubling of the chain length costs one factor
    of s).  When the trace carries points, the actual distance is measured
    and compared against the bound with a 1e-12 relative slack.
    """
    if n < 0 or k < 1:
        raise ParameterError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    if k > 2 ** n:
        raise PreconditionError(f"k={k} exceeds 2**n={2 ** n}")
    if k > len(trace.gaps):
        raise LengthError(f"trace has {len(trace.gaps)} gaps, need {k}")
    bound = trace.space_s ** n * sum(trace.gaps[:k])
    actual = None
    ok = None
    if trace.points is not None and trace.distance is not None:
        actual = trace.distance(trace.points[0], trace.points[k])
        ok = actual <= bound * (1.0 + _SLACK)
    return TelescopeCheck(bound=bound, actual=actual, ok=ok)


def tail_constant(s: float, gamma: float) -> float:
    """The constant M bounding s**((n+1)(n+2)) / 2**(gamma*n**2) over all n.

    Requires gamma > log2(s).  With alpha = gamma * log_s(2) > 1 the
    supremum evaluates to s**(2 + 9/(4*(alpha-1))).  An ordinary metric
    (s = 1) telescopes without loss, so M degenerates to 1 there.
    """
    if not math.isfinite(s) or s < 1.0:
        raise ParameterError(f"s must be >= 1, got {s}")
    if s == 1.0:
        if gamma <= 0.0:
            raise PreconditionError(f"gamma must be > 0 when s = 1, got {gamma}")
        return 1.0
    if gamma <= math.log2(s):
        raise PreconditionError(
            f"gamma={gamma} must exceed log2(s)={math.log2(s):g}")
    alpha = gamma * math.log(2.0) / math.log(s)
    try:
        return s ** (2.0 + 9.0 / (4.0 * (alpha - 1.0)))
    except OverflowError:
        # the constant blows up as gamma approaches log2(s); an infinite
        # bound is still a valid, if vacuous, majorant
        return math.inf


@dataclass(frozen=True)
class EnvelopeReport:
    ok: bool
    m_constant: float
    worst_n: int
    worst_log_excess: float  # log(ratio) - log(M); <= log1p(rel_tol) when ok


def envelope_check(s: float, gamma: float, n_max: int = 200,
                   rel_tol: float = 1e-9) -> EnvelopeReport:
    """Verify in log space that tail_constant dominates its defining envelope.

    Checks s**((n+1)(n+2)) / 2**(gamma*n**2) <= M * (1 + rel_tol) for all
    n in [0, n_max]; direct evaluation would overflow at these exponents.
    """
    m = tail_constant(s, gamma)
    log_m = math.log(m)
    allowance = math.log1p(rel_tol)
    worst_n = 0
    worst = -math.inf
    ok = True
    for n in range(n_max + 1):
        log_ratio = (n + 1) * (n + 2) * math.log(s) - gamma * n * n * math.log(2.0)
        excess = log_ratio - log_m
        if excess > worst:
            worst = excess
            worst_n = n
        if excess > allowance:
            ok = False
    return EnvelopeReport(ok=ok, m_constant=m, worst_n=worst_n,
                          worst_log_excess=worst)


@dataclass(frozen=True)
class TailEstimate:
    value: float
    truncated: bool


def tail_bound(trace: OrbitTrace, gamma: float, n: int, horizon: int) -> TailEstimate:
    """M times the weighted gap tail sum_{i=n}^{horizon} i**gamma * gaps[i].

    This dominates d(x_n, x_{n+m}) for every m once gamma > log2(s).  The
    weights annihilate index 0, so the bound starts at n = 1; the estimate
    is flagged truncated when known nonzero gaps lie beyond the horizon.
    """
    if n == 0:
        raise PreconditionError(
            "tail bound starts at n = 1: the weight 0**gamma would drop the "
            "first gap from the majorization")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if horizon < n:
        raise ParameterError(f"horizon={horizon} must be >= n={n}")
    m = tail_constant(trace.space_s, gamma)
    upper = min(horizon, len(trace.gaps) - 1)
    total = 0.0
    for i in range(n, upper + 1):
        total += i ** gamma * trace.gaps[i]
    truncated = any(g != 0.0 for g in trace.gaps[horizon + 1:])
    return TailEstimate(value=m * total, truncated=truncated)


# --- Cauchy criteria ---------------------------------------------------


@dataclass(frozen=True)
class PowerCriterion:
    """Weighted series sum n**gamma * gaps[n]; needs gamma > log2(s)."""
    gamma: float


@dataclass(frozen=True)
class WeightedCriterion:
    """Series sum a_n * gaps[n] with weights eventually >= c * n**gamma."""
    a_seq: tuple[float, ...]
    gamma: float


@dataclass(frozen=True)
class GeometricCriterion:
    """Series sum alpha**n * gaps[n] for alpha > 1."""
    alpha: float


Criterion = Union[PowerCriterion, WeightedCriterion, GeometricCriterion]


@dataclass(frozen=True)
class CauchyCertificate:
    gamma: float  # exponent used for tail bounds
    m_constant: float
    partial_sums: tuple[float, ...]
    verdict: str  # certified | not-certified | inconclusive
    criterion: Criterion
    data: dict = field(repr=False)
    trace: OrbitTrace = field(repr=False)
    horizon: int = 0

    def tail_at(self, n: int) -> TailEstimate:
        return tail_bound(self.trace, self.gamma, n, self.horizon)


def cauchy_report(trace: OrbitTrace, criterion: Criterion, horizon: int,
                  criteria: SeriesCriteria = DEFAULT_CRITERIA) -> CauchyCertificate:
    """Assess an orbit's gap series under one of the three criteria.

    The weighted partial sums run over n = 1..horizon (capped by the trace
    length); the verdict maps the series evidence to certified,
    not-certified, or inconclusive.  The certificate exposes tail bounds at
    the exponent implied by the criterion: the given gamma for the power and
    weighted forms, and log2(s) + 1 for the geometric form, where the
    geometric weights eventually dominate every polynomial.
    """
    if horizon < 1:
        raise ParameterError(f"horizon must be >= 1, got {horizon}")
    s = trace.space_s
    data: dict = {}

    if isinstance(criterion, PowerCriterion):
        gamma_tail = criterion.gamma
        _require_gamma(gamma_tail, s)
        weight = lambda n: float(n) ** criterion.gamma
        h = min(horizon, len(trace.gaps) - 1)
    elif isinstance(criterion, WeightedCriterion):
        gamma_tail = criterion.gamma
        _require_gamma(gamma_tail, s)
        a_seq = [float(v) for v in criterion.a_seq]
        if any(not math.isfinite(v) or v <= 0.0 for v in a_seq):
            raise ParameterError("weight sequence entries must be positive")
        h = min(horizon, len(trace.gaps) - 1, len(a_seq))
        weight = lambda n: a_seq[n - 1]
        window = range(max(1, h // 2), h + 1)
        proxy = min((a_seq[n - 1] / n ** criterion.gamma for n in window),
                    default=math.inf)
        data["liminf_proxy"] = proxy
        data["liminf_proxy_note"] = (
            "finite-window infimum of a_n / n**gamma over the second half "
            "of the horizon; a stand-in for the limit-inferior hypothesis")
    elif isinstance(criterion, GeometricCriterion):
        if criterion.alpha <= 1.0:
            raise PreconditionError(
                f"geometric base must be > 1, got {criterion.alpha}")
        gamma_tail = math.log2(s) + 1.0
        weight = lambda n: criterion.alpha ** n
        h = min(horizon, len(trace.gaps) - 1)
        data["gamma_star"] = gamma_tail
        # diagnostic: alpha**n times the remaining raw gap sum
        suffix = 0.0
        geo_tail = [0.0] * (h + 1)
        for i in range(len(trace.gaps) - 1, -1, -1):
            suffix += trace.gaps[i]
            if i <= h:
                geo_tail[i] = criterion.alpha ** i * suffix
        data["geometric_tail"] = geo_tail
    else:
        raise ParameterError(f"unknown criterion {criterion!r}")

    sums = []
    total = 0.0
    for n in range(1, h + 1):
        total += weight(n) * trace.gaps[n]
        sums.append(total)
    if sums:
        s_full = sums[-1]
        s_half = sums[max(1, h // 2) - 1]
    else:
        s_full = s_half = 0.0
    series = series_verdict(s_half, s_full, criteria)
    verdict = {EVIDENCE_FOR: CERTIFIED, EVIDENCE_AGAINST: NOT_CERTIFIED}.get(
        series, INCONCLUSIVE)
    data.update({"s_half": s_half, "s_full": s_full})

    return CauchyCertificate(
        gamma=gamma_tail,
        m_constant=tail_constant(s, gamma_tail),
        partial_sums=tuple(sums),
        verdict=verdict,
        criterion=criterion,
        data=data,
        trace=trace,
        horizon=max(h, 1),
    )


def _require_gamma(gamma: float, s: float) -> None:
    if s == 1.0:
        if gamma <= 0.0:
            raise PreconditionError(f"gamma must be > 0 when s = 1, got {gamma}")
    elif gamma <= math.log2(s):
        raise PreconditionError(
            f"gamma={gamma} must exceed log2(s)={math.log2(s):g}")


# --- CSV import/export -------------------------------------------------


def save_trace_csv(trace: OrbitTrace, path) -> None:
    """Write a trace as CSV with columns n, gap and optional point columns."""
    path = Path(path)
    point_cols: list[str] = []
    rows: list[list] = []
    if trace.points is None:
        for i, g in enumerate(trace.gaps):
            rows.append([i, repr(g)])
    else:
        first = trace.points[0]
        if isinstance(first, tuple):
            point_cols = [f"p{j}" for j in range(len(first))]
        elif isinstance(first, str):
            point_cols = ["label"]
        else:
            point_cols = ["p0"]
        for i, pt in enumerate(trace.points):
            gap = repr(trace.gaps[i]) if i < len(trace.gaps) else ""
            if isinstance(pt, tuple):
                coords = [repr(float(c)) for c in pt]
            elif isinstance(pt, str):
                coords = [pt]
            else:
                coords = [repr(float(pt))]
            rows.append([i, gap] + coords)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "gap"] + point_cols)
        writer.writerows(rows)


def load_trace_csv(path, *, space: Optional[BMetricSpace] = None,
                   s: Optional[float] = None) -> OrbitTrace:
    """Read a trace written by save_trace_csv.

    The file does not store the relaxation constant, so it must come from
    either a space or the explicit s argument.  When a space is given and
    the file has point columns, gaps are recomputed from the points.
    """
    if space is None and s is None:
        raise ParameterError("provide either space=... or s=... to load a trace")
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ParameterError(f"{path} has no header row")
        names = list(reader.fieldnames)
        records = list(reader)
    vec_cols = sorted((c for c in names if re.fullmatch(r"p\d+", c)),
                      key=lambda c: int(c[1:]))
    has_label = "label" in names

    gaps: list[float] = []
    points: list[Point] = []
    for rec in records:
        gap_text = (rec.get("gap") or "").strip()
        if gap_text:
            gaps.append(float(gap_text))
        if has_label:
            points.append(rec["label"])
        elif vec_cols:
            coords = [float(rec[c]) for c in vec_cols]
            points.append(coords[0] if len(coords) == 1 else tuple(coords))
    if not points:
        return OrbitTrace(gaps=tuple(gaps), space_s=s if s is not None else space.s)
    if space is not None:
        return trace_from_points(points, space)
    return OrbitTrace(gaps=tuple(gaps), space_s=s, points=tuple(points))
