"""Fixed points of finite-set-valued maps under gated contraction.

A set-valued map T sends each point to a finite, non-empty set of
candidates.  Contraction is measured between whole image sets with the
Hausdorff distance, and is only required on pairs the admissibility
weight alpha marks as relevant (alpha >= 1).  Orbits pick the nearest
admissible candidate at every step; finite images make the infimum
attainable, so no selection slack is needed in practice, though one can
be supplied and is reported rather than enforced.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from .cauchy import (
    CauchyCertificate,
    PowerCriterion,
    _require_gamma,
    cauchy_report,
    trace_from_gaps,
)
from .comparison import ComparisonFunction
from .errors import (
    AdmissibleSuccessorNotFound,
    ConfigError,
    DomainError,
    EmptySetError,
    ParameterError,
    RangeError,
)
from .spaces import BMetricSpace, Point, hausdorff_distance

# relative slack on the per-step gap majorant; consecutive-halving systems
# hit the bound exactly, so a pure <= comparison would flicker on ulps
_MAJORANT_SLACK = 1e-9
_SLACK = 1e-12


@dataclass(frozen=True)
class MultiMap:
    """A point-to-finite-set map.  Images must be non-empty."""

    apply: Callable[[Point], Sequence[Point]]
    label: str = "multimap"

    def image(self, x: Point) -> tuple[Point, ...]:
        values = tuple(self.apply(x))
        if not values:
            raise EmptySetError(f"{self.label} has empty image at {x!r}")
        return values

    def __call__(self, x: Point) -> tuple[Point, ...]:
        return self.image(x)


@dataclass(frozen=True)
class AlphaFunction:
    """Non-negative pair weight; pairs with weight >= 1 are admissible."""

    eval: Callable[[Point, Point], float]
    label: str = "alpha"

    def __call__(self, x: Point, y: Point) -> float:
        value = float(self.eval(x, y))
        if not math.isfinite(value) or value < 0.0:
            raise RangeError(
                f"{self.label}({x!r}, {y!r}) = {value!r}, must be finite and >= 0")
        return value


def always_admissible() -> AlphaFunction:
    return AlphaFunction(eval=lambda x, y: 1.0, label="always_admissible")


def half_third() -> MultiMap:
    """The two-candidate shrinking system x -> {x/2, x/3} on the line."""
    return MultiMap(apply=lambda x: (x / 2.0, x / 3.0), label="half_third")


_MULTIMAP_REGISTRY: dict[str, Callable[[], MultiMap]] = {
    "half_third": half_third,
}


def multimap_from_name(text: str) -> MultiMap:
    name = text.strip()
    if name not in _MULTIMAP_REGISTRY:
        known = ", ".join(sorted(_MULTIMAP_REGISTRY))
        raise ParameterError(f"unknown multimap {text!r}; known: {known}")
    return _MULTIMAP_REGISTRY[name]()


def list_multimap_templates() -> list[str]:
    return sorted(_MULTIMAP_REGISTRY)


def alpha_star(A: Sequence[Point], B: Sequence[Point],
               alpha: AlphaFunction) -> float:
    """Smallest admissibility weight over all cross pairs of two finite sets."""
    A = tuple(A)
    B = tuple(B)
    if not A or not B:
        raise EmptySetError("alpha_star needs non-empty sets")
    return min(alpha(u, v) for u in A for v in B)


# --- hypothesis certification ------------------------------------------


@dataclass(frozen=True)
class HypothesisWitness:
    x: Point
    y: Point
    kind: str  # "admissibility" | "contractivity"
    lhs: float
    rhs: float


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    admissibility_ok: bool
    contractivity_ok: bool
    witnesses: tuple[HypothesisWitness, ...]
    pairs_checked: int


def certify_hypotheses(space: BMetricSpace, T: MultiMap, alpha: AlphaFunction,
                       phi: ComparisonFunction,
                       pair_sample: Sequence[tuple[Point, Point]]) -> HypothesisReport:
    """Check the two solver hypotheses on a sample of point pairs.

    Admissibility: alpha(x, y) >= 1 must force the cross-pair minimum of
    alpha over the two image sets to be >= 1.  Gated contraction: that
    minimum times the Hausdorff distance of the images must not exceed
    phi of the point distance (up to 1e-12 relative slack, since scaling
    maps can hit the bound exactly).
    """
    witnesses: list[HypothesisWitness] = []
    adm_ok = True
    con_ok = True
    for x, y in pair_sample:
        d_xy = space.d(x, y)
        img_x = T.image(x)
        img_y = T.image(y)
        a_star = alpha_star(img_x, img_y, alpha)
        if alpha(x, y) >= 1.0 and a_star < 1.0:
            adm_ok = False
            witnesses.append(HypothesisWitness(x=x, y=y, kind="admissibility",
                                               lhs=a_star, rhs=1.0))
        lhs = a_star * hausdorff_distance(img_x, img_y, space)
        rhs = phi(d_xy)
        if lhs > rhs * (1.0 + _SLACK):
            con_ok = False
            witnesses.append(HypothesisWitness(x=x, y=y, kind="contractivity",
                                               lhs=lhs, rhs=rhs))
    return HypothesisReport(
        passed=adm_ok and con_ok,
        admissibility_ok=adm_ok,
        contractivity_ok=con_ok,
        witnesses=tuple(witnesses),
        pairs_checked=len(tuple(pair_sample)),
    )


# --- orbit construction ------------------------------------------------


@dataclass(frozen=True)
class MultiSolveReport:
    orbit: tuple[Point, ...]
    fixed_point: Point
    residual: float  # distance from the final point to its own image set
    gap_majorant_ok: bool
    admissibility_trace: tuple[float, ...]
    converged: bool
    iterations: int
    majorant_violations: tuple[int, ...]  # step indices where the bound failed
    certificate: Optional[CauchyCertificate] = field(repr=False, default=None)
    limit_admissibility_ok: Optional[bool] = None
    data: dict = field(default_factory=dict, repr=False)


def _set_residual(space: BMetricSpace, x: Point,
                  image: Sequence[Point]) -> float:
    return min(space.d(x, y) for y in image)


def is_fixed_point(space: BMetricSpace, T: MultiMap, x: Point,
                   tol: float = 0.0) -> bool:
    """True iff x is within tol of its own image set (exact for tol = 0)."""
    return _set_residual(space, x, T.image(x)) <= tol


def multivalued_solve(space: BMetricSpace, T: MultiMap, alpha: AlphaFunction,
                      phi: ComparisonFunction, gamma: float,
                      x0: Point, x1: Point,
                      tol: float = 0.0, max_iter: int = 10000,
                      q: float = 1.0) -> MultiSolveReport:
    """Drive an orbit of the set-valued map T to a fixed point.

    The first step goes to the supplied x1 (which must lie in T(x0));
    every later step picks the nearest candidate with admissibility
    weight >= 1, ties broken by image order.  Each gap is compared
    against q * phi-iterate of the first gap; failures are recorded, not
    fatal.  Stops as soon as some point sits within tol of its own image
    set.  The gamma-weighted gap series is handed to the Cauchy
    certifier, and on convergence every orbit point is audited for
    admissibility against the limit.
    """
    _require_gamma(gamma, space.s)
    if q < 1.0:
        raise ParameterError(f"slack q must be >= 1, got {q}")
    if tol < 0.0:
        raise ParameterError(f"tol must be >= 0, got {tol}")
    if max_iter < 1:
        raise ParameterError(f"max_iter must be >= 1, got {max_iter}")

    image0 = T.image(x0)
    if all(space.d(x1, cand) != 0.0 for cand in image0):
        raise ParameterError("x1 must belong to the image of x0")

    orbit: list[Point] = [x0]
    gaps: list[float] = []
    adm_trace: list[float] = []
    majorant_violations: list[int] = []
    phi_iter = None  # phi^[n] of the first gap, set once that gap is known

    x = x0
    image = image0
    residual = _set_residual(space, x, image)
    stopped = residual <= tol
    steps = 0
    while not stopped and steps < max_iter:
        if steps == 0:
            if alpha(x, x1) < 1.0:
                raise AdmissibleSuccessorNotFound(
                    f"step 0: alpha(x0, x1) = {alpha(x, x1)!r} < 1")
            successor = x1
        else:
            admissible = [y for y in image if alpha(x, y) >= 1.0]
            if not admissible:
                raise AdmissibleSuccessorNotFound(
                    f"step {steps}: no candidate in the image of {x!r} "
                    f"has admissibility weight >= 1")
            successor = admissible[0]
            best = space.d(x, successor)
            for y in admissible[1:]:
                dy = space.d(x, y)
                if dy < best:
                    successor, best = y, dy
        gap = space.d(x, successor)
        if phi_iter is None:
            phi_iter = gap  # phi^[0](d0) = d0
        if gap > q * phi_iter * (1.0 + _MAJORANT_SLACK):
            majorant_violations.append(steps)
        phi_iter = phi(phi_iter)
        adm_trace.append(alpha(x, successor))
        gaps.append(gap)
        orbit.append(successor)
        x = successor
        image = T.image(x)
        residual = _set_residual(space, x, image)
        steps += 1
        stopped = residual <= tol

    gap_majorant_ok = not majorant_violations
    converged = stopped and gap_majorant_ok
    certificate = None
    if len(gaps) >= 1:
        trace = trace_from_gaps(gaps, space.s)
        certificate = cauchy_report(trace, PowerCriterion(gamma),
                                    horizon=max(1, len(gaps) - 1))
    limit_adm = None
    if stopped:
        limit_adm = all(alpha(p, x) >= 1.0 for p in orbit)
    return MultiSolveReport(
        orbit=tuple(orbit),
        fixed_point=x,
        residual=residual,
        gap_majorant_ok=gap_majorant_ok,
        admissibility_trace=tuple(adm_trace),
        converged=converged,
        iterations=steps,
        majorant_violations=tuple(majorant_violations),
        certificate=certificate,
        limit_admissibility_ok=limit_adm,
        data={"tol": tol, "q": q, "gamma": gamma, "stopped": stopped},
    )


# --- weakly-Picard probe -----------------------------------------------


@dataclass(frozen=True)
class PicardProbeEntry:
    start: tuple[Point, Point]
    status: str  # "converged" | "not-converged" | "invalid-start" | "error"
    message: str = ""
    report: Optional[MultiSolveReport] = field(repr=False, default=None)


@dataclass(frozen=True)
class PicardProbeReport:
    entries: tuple[PicardProbeEntry, ...]
    total: int
    converged_count: int
    fraction: float
    all_converged: bool


def weakly_picard_probe(space: BMetricSpace, T: MultiMap,
                        alpha: AlphaFunction, phi: ComparisonFunction,
                        gamma: float,
                        start_pairs: Sequence[tuple[Point, Point]],
                        tol: float = 0.0, max_iter: int = 10000,
                        q: float = 1.0) -> PicardProbeReport:
    """Run the solver from many start pairs and tally convergence.

    Evidence for the weakly-Picard property: every admissible start pair
    should extend to an orbit ending at a fixed point.  Invalid pairs
    (second point not in the image of the first) and per-run errors are
    recorded in their entries instead of aborting the probe.
    """
    entries: list[PicardProbeEntry] = []
    converged = 0
    for x, y in start_pairs:
        pair = (x, y)
        try:
            image = T.image(x)
        except EmptySetError as exc:
            entries.append(PicardProbeEntry(start=pair, status="error",
                                            message=str(exc)))
            continue
        if all(space.d(y, cand) != 0.0 for cand in image):
            entries.append(PicardProbeEntry(
                start=pair, status="invalid-start",
                message="second point is not in the image of the first"))
            continue
        try:
            report = multivalued_solve(space, T, alpha, phi, gamma, x, y,
                                       tol=tol, max_iter=max_iter, q=q)
        except (AdmissibleSuccessorNotFound, DomainError, RangeError) as exc:
            entries.append(PicardProbeEntry(start=pair, status="error",
                                            message=str(exc)))
            continue
        if report.converged:
            converged += 1
            entries.append(PicardProbeEntry(start=pair, status="converged",
                                            report=report))
        else:
            entries.append(PicardProbeEntry(start=pair, status="not-converged",
                                            report=report))
    total = len(entries)
    fraction = converged / total if total else 1.0
    return PicardProbeReport(
        entries=tuple(entries),
        total=total,
        converged_count=converged,
        fraction=fraction,
        all_converged=converged == total,
    )


# --- JSON-backed finite multimaps --------------------------------------


def load_multimap_json(path) -> tuple[tuple[Point, ...], MultiMap]:
    """Load a finite multimap from {"points": [...], "images": {id: [ids]}}.

    Points may be numbers, coordinate lists, or string labels; image
    entries map a point's index to the indices of its image set.  Every
    point needs a non-empty image.  All problems are reported in one
    ConfigError.  Returns the point roster and a MultiMap that looks
    points up by equality.
    """
    path = Path(path)
    problems: list[str] = []
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    if "points" not in raw:
        problems.append("missing key 'points'")
    if "images" not in raw:
        problems.append("missing key 'images'")
    if problems:
        raise ConfigError(f"{path}: " + "; ".join(problems))

    raw_points = raw["points"]
    if not isinstance(raw_points, list) or not raw_points:
        raise ConfigError(f"{path}: 'points' must be a non-empty list")
    points: list[Point] = []
    for i, p in enumerate(raw_points):
        if isinstance(p, list):
            if not all(isinstance(c, (int, float)) for c in p):
                problems.append(f"points[{i}]: coordinates must be numbers")
                points.append(())
            else:
                points.append(tuple(float(c) for c in p))
        elif isinstance(p, str):
            points.append(p)
        elif isinstance(p, (int, float)):
            points.append(float(p))
        else:
            problems.append(f"points[{i}]: unsupported type {type(p).__name__}")
            points.append(())

    raw_images = raw["images"]
    if not isinstance(raw_images, dict):
        raise ConfigError(f"{path}: 'images' must be an object")
    table: dict[int, tuple[Point, ...]] = {}
    seen: set[int] = set()
    for key, ids in raw_images.items():
        try:
            idx = int(key)
        except ValueError:
            problems.append(f"images key {key!r} is not an integer index")
            continue
        if not 0 <= idx < len(points):
            problems.append(f"images key {key!r} is out of range")
            continue
        seen.add(idx)
        if not isinstance(ids, list) or not ids:
            problems.append(f"images[{key!r}] must be a non-empty list")
            continue
        image: list[Point] = []
        ok = True
        for j in ids:
            if not isinstance(j, int) or not 0 <= j < len(points):
                problems.append(f"images[{key!r}]: bad point index {j!r}")
                ok = False
                break
            image.append(points[j])
        if ok:
            table[idx] = tuple(image)
    for idx in range(len(points)):
        if idx not in seen:
            problems.append(f"point {idx} has no image entry")
    if problems:
        raise ConfigError(f"{path}: " + "; ".join(problems))

    def lookup(x: Point) -> tuple[Point, ...]:
        for i, p in enumerate(points):
            if p == x:
                return table[i]
        raise DomainError(f"point {x!r} is not in the multimap table")

    return tuple(points), MultiMap(apply=lookup, label=path.stem)
