"""Fixed-point solvers with per-iteration certificates.

Two single-valued solvers live here.  The descent solver accepts any map
that pays for each step out of a potential function; the contraction
solver accepts maps whose consecutive gaps shrink under a comparison
function and prices the remaining error a priori, so it can stop exactly
when the guaranteed error drops below the target.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .comparison import ComparisonFunction
from .cauchy import TailEstimate, tail_constant
from .errors import ParameterError
from .spaces import BMetricSpace, Point

# relative slack for inequality checks that can be exactly tight in floats
_SLACK = 1e-12

ASSUME_CONTINUOUS = "map is continuous (assumed, not checked)"
ASSUME_COMPLETE = "space is complete (assumed, not checked)"


@dataclass(frozen=True)
class OrbitViolation:
    n: int
    lhs: float
    rhs: float
    kind: str  # "descent" | "budget" | "contraction"


@dataclass(frozen=True)
class SolveReport:
    fixed_point: Point
    iterations: int
    residual: float
    bounds: tuple[float, ...]
    violations: tuple[OrbitViolation, ...]
    converged: bool
    assumptions: tuple[str, ...]
    data: dict = field(default_factory=dict, repr=False)

    def to_json_dict(self) -> dict:
        fp = self.fixed_point
        if isinstance(fp, tuple):
            fp = list(fp)
        return {
            "fixed_point": fp,
            "iterations": self.iterations,
            "residual": self.residual,
            "bounds": list(self.bounds),
            "violations": [asdict(v) for v in self.violations],
            "converged": self.converged,
            "assumptions": list(self.assumptions),
        }

    def save_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=2) + "\n")


def _descent_ok(lhs: float, rhs: float) -> bool:
    if rhs > 0.0:
        return lhs <= rhs * (1.0 + _SLACK)
    return lhs <= rhs


def caristi_solve(map_fn: Callable[[Point], Point],
                  potential: Callable[[Point], float],
                  alpha: float,
                  x0: Point,
                  space: BMetricSpace,
                  *,
                  tol: float = 1e-9,
                  max_iter: int = 100000) -> SolveReport:
    """Iterate a map whose steps are paid for by a shrinking potential.

    Each step must satisfy d(x_n, x_{n+1}) <= potential(x_n) -
    alpha * potential(x_{n+1}) with alpha > 1; violations are recorded, not
    fatal.  The same inequality caps the alpha-weighted gap series by
    alpha * potential(x_1), which the report verifies as a budget check.
    Stops when both the gap and the potential fall below tol.
    """
    if not math.isfinite(alpha) or alpha <= 1.0:
        raise ParameterError(f"alpha must be > 1, got {alpha}")
    if tol <= 0.0:
        raise ParameterError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")

    violations: list[OrbitViolation] = []
    bounds: list[float] = []
    gaps: list[float] = []
    x = x0
    pot = float(potential(x0))
    pot_x1 = None
    weighted_sum = 0.0
    stopped = False
    iterations = 0
    for n in range(max_iter):
        bounds.append(alpha ** n * pot)
        x_next = map_fn(x)
        gap = space.d(x, x_next)
        gaps.append(gap)
        pot_next = float(potential(x_next))
        allowed = pot - alpha * pot_next
        if not _descent_ok(gap, allowed):
            violations.append(OrbitViolation(n=n, lhs=gap, rhs=allowed,
                                             kind="descent"))
        if n == 0:
            pot_x1 = pot_next
        else:
            weighted_sum += alpha ** n * gap
        x, pot = x_next, pot_next
        iterations = n + 1
        if gap < tol and pot_next < tol:
            stopped = True
            break
    bounds.append(alpha ** iterations * pot)

    budget = math.inf if pot_x1 is None else alpha * pot_x1
    budget_ok = weighted_sum <= budget * (1.0 + _SLACK)
    if not budget_ok:
        violations.append(OrbitViolation(n=iterations, lhs=weighted_sum,
                                         rhs=budget, kind="budget"))
    residual = space.d(x, map_fn(x))
    return SolveReport(
        fixed_point=x,
        iterations=iterations,
        residual=residual,
        bounds=tuple(bounds),
        violations=tuple(violations),
        converged=stopped and not violations,
        assumptions=(ASSUME_CONTINUOUS, ASSUME_COMPLETE),
        data={
            "weighted_gap_sum": weighted_sum,
            "budget": budget,
            "budget_ok": budget_ok,
            "final_potential": pot,
            "gaps": tuple(gaps),
        },
    )


def apriori_error(phi: ComparisonFunction, d0: float, s: float, gamma: float,
                  n: int, horizon: int = 60) -> TailEstimate:
    """Guaranteed distance from the n-th iterate to the limit.

    Under gap majorization d(x_i, x_{i+1}) <= phi^[i](d0) the limit lies
    within s * M * sum_{i>=n} i**gamma * phi^[i](d0).  The sum is taken to
    the horizon; the remainder is priced geometrically using the largest
    term-to-term ratio observed over the last tenth of the horizon.  If
    that ratio reaches 1 the remainder is unpriceable and the estimate is
    flagged truncated.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if horizon < n:
        raise ParameterError(f"horizon={horizon} must be >= n={n}")
    if d0 < 0.0 or not math.isfinite(d0):
        raise ParameterError(f"d0 must be finite and >= 0, got {d0}")
    m = tail_constant(s, gamma)

    terms = []
    value = d0
    for i in range(horizon + 1):
        terms.append(i ** gamma * value)
        value = phi(value)
    partial = sum(terms[n:])

    window = range(max(n, horizon - max(10, horizon // 10) + 1), horizon)
    q = 0.0
    for i in window:
        if terms[i] > 0.0:
            q = max(q, terms[i + 1] / terms[i])
        elif terms[i + 1] > 0.0:
            q = math.inf
    if terms[horizon] == 0.0:
        return TailEstimate(value=s * m * partial, truncated=False)
    if q >= 1.0:
        return TailEstimate(value=s * m * partial, truncated=True)
    tail = terms[horizon] * q / (1.0 - q)
    return TailEstimate(value=s * m * (partial + tail), truncated=False)


def boyd_wong_solve(map_fn: Callable[[Point], Point],
                    phi: ComparisonFunction,
                    x0: Point,
                    space: BMetricSpace,
                    *,
                    gamma: float,
                    eps: float = 1e-9,
                    horizon: int = 60,
                    max_iter: int = 100000) -> SolveReport:
    """Iterate a phi-contraction until the a-priori error bound drops below eps.

    Consecutive gaps are checked against d(x_{n+1}, x_{n+2}) <=
    phi(d(x_n, x_{n+1})) as the orbit unrolls; any failure is recorded.
    The per-iterate bounds come from apriori_error seeded with the first
    gap, so the stopping index is known from the start.
    """
    if eps <= 0.0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")
    x1 = map_fn(x0)
    d0 = space.d(x0, x1)
    if d0 == 0.0:
        return SolveReport(
            fixed_point=x0, iterations=0, residual=0.0, bounds=(),
            violations=(), converged=True,
            assumptions=(ASSUME_CONTINUOUS, ASSUME_COMPLETE),
            data={"d0": 0.0},
        )

    # the bound depends only on d0, so locate the stopping index first;
    # one shared term array keeps this linear in the horizon
    L = max(horizon, min(max_iter, 2000))
    terms = []
    value = d0
    for i in range(L + 1):
        terms.append(i ** gamma * value)
        value = phi(value)
    suffix = [0.0] * (L + 2)
    for i in range(L, 0, -1):
        suffix[i] = suffix[i + 1] + terms[i]
    window = range(max(1, L - max(10, L // 10) + 1), L)
    q = 0.0
    for i in window:
        if terms[i] > 0.0:
            q = max(q, terms[i + 1] / terms[i])
        elif terms[i + 1] > 0.0:
            q = math.inf
    if terms[L] == 0.0:
        tail, truncated = 0.0, False
    elif q >= 1.0:
        tail, truncated = 0.0, True
    else:
        tail, truncated = terms[L] * q / (1.0 - q), False
    m = tail_constant(space.s, gamma)
    stop_n = None
    bounds: list[float] = []
    for n in range(1, min(max_iter, L) + 1):
        bounds.append(space.s * m * (suffix[n] + tail))
        if not truncated and bounds[-1] < eps:
            stop_n = n
            break

    steps = stop_n if stop_n is not None else min(max_iter, len(bounds))
    points = [x0, x1]
    gaps = [d0]
    violations: list[OrbitViolation] = []
    for k in range(steps):
        points.append(map_fn(points[-1]))
        gaps.append(space.d(points[-2], points[-1]))
        lhs = gaps[-1]
        rhs = phi(gaps[-2])
        if lhs > rhs * (1.0 + _SLACK):
            violations.append(OrbitViolation(n=k, lhs=lhs, rhs=rhs,
                                             kind="contraction"))
    fixed_point = points[steps]
    residual = gaps[steps]  # d(x_steps, x_{steps+1})
    return SolveReport(
        fixed_point=fixed_point,
        iterations=steps,
        residual=residual,
        bounds=tuple(bounds),
        violations=tuple(violations),
        converged=stop_n is not None and not violations,
        assumptions=(ASSUME_CONTINUOUS, ASSUME_COMPLETE),
        data={"d0": d0, "eps": eps, "gamma": gamma, "gaps": tuple(gaps),
              "tail_truncated": truncated},
    )


@dataclass(frozen=True)
class UniquenessReport:
    agreed: bool
    inconclusive: bool
    limits: tuple[Point, ...]
    pairwise: tuple[tuple[float, ...], ...]
    threshold: float


def uniqueness_probe(map_fn: Callable[[Point], Point],
                     space: BMetricSpace,
                     starts: Sequence[Point],
                     *,
                     tol: float = 1e-12,
                     max_iter: int = 100000) -> UniquenessReport:
    """Run orbits from several starts and compare their limits.

    Numerical evidence only: agreement of finitely many orbits cannot prove
    uniqueness, but disagreement refutes it.  An orbit that fails to settle
    within max_iter marks the probe inconclusive.
    """
    if not starts:
        raise ParameterError("need at least one start point")
    limits: list[Point] = []
    inconclusive = False
    for x0 in starts:
        x = x0
        settled = False
        for _ in range(max_iter):
            x_next = map_fn(x)
            if space.d(x, x_next) < tol:
                x = x_next
                settled = True
                break
            x = x_next
        if not settled:
            inconclusive = True
        limits.append(x)
    pairwise = tuple(
        tuple(space.d(a, b) for b in limits) for a in limits)
    threshold = max(10.0 * tol, 1e-8)
    worst = max((pairwise[i][j] for i in range(len(limits))
                 for j in range(len(limits))), default=0.0)
    return UniquenessReport(
        agreed=(not inconclusive) and worst <= threshold,
        inconclusive=inconclusive,
        limits=tuple(limits),
        pairwise=pairwise,
        threshold=threshold,
    )
