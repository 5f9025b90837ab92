"""b-metric spaces over concrete point domains.

A b-metric keeps the usual metric axioms except the triangle inequality,
which is relaxed by a constant s >= 1:

    d(x, y) <= s * (d(x, z) + d(z, y))

Points are real scalars, fixed-dimension real vectors (tuples), or opaque
string labels in a finite discrete space.
"""
from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import (
    DistanceDomainError,
    EmptySetError,
    NotABMetric,
    ParameterError,
)

Point = Union[float, tuple, str]
Sampler = Callable[[random.Random], Point]

# relative slack absorbing float rounding in exact-equality cases of axiom iii
TRIANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class DomainDescriptor:
    """Names a point domain and optionally knows how to sample it."""

    label: str
    sampler: Optional[Sampler] = None


@dataclass(frozen=True)
class BMetricSpace:
    distance: Callable[[Point, Point], float]
    s: float
    descriptor: DomainDescriptor = field(
        default_factory=lambda: DomainDescriptor("unnamed"))

    def __post_init__(self) -> None:
        if not math.isfinite(self.s) or self.s < 1.0:
            raise ParameterError(f"relaxation constant must be >= 1, got {self.s}")

    def d(self, x: Point, y: Point) -> float:
        """Evaluate the distance, rejecting negative or non-finite values."""
        value = self.distance(x, y)
        if not math.isfinite(value) or value < 0.0:
            raise DistanceDomainError(
                f"distance({x!r}, {y!r}) returned {value!r}")
        return value

    def sample(self, count: int, rng: random.Random) -> list[Point]:
        if self.descriptor.sampler is None:
            raise ParameterError(
                f"space {self.descriptor.label!r} has no point sampler")
        return [self.descriptor.sampler(rng) for _ in range(count)]


@dataclass(frozen=True)
class AxiomViolation:
    axiom: str  # "zero-iff-equal" | "symmetry" | "relaxed-triangle"
    witness: tuple
    lhs: float
    rhs: float


@dataclass(frozen=True)
class AxiomReport:
    passed: bool
    violations: tuple[AxiomViolation, ...]
    pairs_checked: int
    triples_checked: int


def verify_b_metric_axioms(space: BMetricSpace, sample: Sequence[Point],
                           eq_tol: float = 0.0) -> AxiomReport:
    """Exhaustively check the three axioms over a finite point sample.

    The axioms are universally quantified, so "passed" means "no
    counterexample found among all ordered pairs and triples of the sample".
    eq_tol is the absolute tolerance used when testing d(x, y) = 0 against
    point equality; the builtin spaces are exact at coincident points, hence
    the default 0.
    """
    if not sample:
        raise ParameterError("sample must be non-empty")
    pts = list(sample)
    violations: list[AxiomViolation] = []

    n_pairs = 0
    for x in pts:
        for y in pts:
            n_pairs += 1
            dxy = space.d(x, y)
            if x == y and dxy > eq_tol:
                violations.append(AxiomViolation("zero-iff-equal", (x, y), dxy, eq_tol))
            if x != y and dxy <= eq_tol:
                violations.append(AxiomViolation("zero-iff-equal", (x, y), dxy, eq_tol))
            dyx = space.d(y, x)
            if dxy != dyx:
                violations.append(AxiomViolation("symmetry", (x, y), dxy, dyx))

    n_triples = 0
    for x in pts:
        for z in pts:
            for y in pts:
                n_triples += 1
                lhs = space.d(x, y)
                rhs = space.s * (space.d(x, z) + space.d(z, y))
                if lhs > rhs * (1.0 + TRIANGLE_SLACK):
                    violations.append(
                        AxiomViolation("relaxed-triangle", (x, z, y), lhs, rhs))

    return AxiomReport(
        passed=not violations,
        violations=tuple(violations),
        pairs_checked=n_pairs,
        triples_checked=n_triples,
    )


def snowflake(q: float) -> BMetricSpace:
    """Real line with d(x, y) = |x - y|**q and s = 2**(q-1).

    q = 1 is the ordinary real line; q > 1 raises small distances and breaks
    the plain triangle inequality, which survives only up to the factor s.
    """
    if not math.isfinite(q) or q < 1.0:
        raise ParameterError(f"snowflake exponent must be >= 1, got {q}")

    def dist(x: Point, y: Point) -> float:
        return abs(x - y) ** q

    return BMetricSpace(
        distance=dist,
        s=2.0 ** (q - 1.0),
        descriptor=DomainDescriptor(
            label=f"snowflake(q={q:g})",
            sampler=lambda rng: rng.uniform(-10.0, 10.0),
        ),
    )


def lp_quasinorm(p: float, dim: int) -> BMetricSpace:
    """R**dim with d(x, y) = (sum |x_i - y_i|**p)**(1/p) for p in (0, 1].

    For p < 1 this is a quasinorm distance; the relaxed triangle inequality
    holds with s = 2**(1/p - 1).
    """
    if not (0.0 < p <= 1.0):
        raise ParameterError(f"exponent p must lie in (0, 1], got {p}")
    if dim < 1:
        raise ParameterError(f"dimension must be >= 1, got {dim}")

    def dist(x: Point, y: Point) -> float:
        return sum(abs(a - b) ** p for a, b in zip(x, y)) ** (1.0 / p)

    return BMetricSpace(
        distance=dist,
        s=2.0 ** (1.0 / p - 1.0),
        descriptor=DomainDescriptor(
            label=f"lp_quasinorm(p={p:g}, dim={dim})",
            sampler=lambda rng: tuple(rng.uniform(-10.0, 10.0) for _ in range(dim)),
        ),
    )


def discrete_matrix(labels: Sequence[str], matrix: Sequence[Sequence[float]],
                    s: float) -> BMetricSpace:
    """Finite labeled space with distances from a table and a declared s.

    The table must be square, symmetric, non-negative, zero exactly on the
    diagonal, and must satisfy the relaxed triangle inequality for the
    declared s; these checks are exhaustive over the table.
    """
    if not math.isfinite(s) or s < 1.0:
        raise ParameterError(f"declared s must be >= 1, got {s}")
    labels = [str(l) for l in labels]
    n = len(labels)
    if n == 0:
        raise ParameterError("label list must be non-empty")
    if len(set(labels)) != n:
        raise ParameterError("labels must be unique")
    rows = [list(map(float, row)) for row in matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParameterError(f"matrix must be {n}x{n} to match the labels")

    for i in range(n):
        if rows[i][i] != 0.0:
            raise NotABMetric(
                f"diagonal entry for {labels[i]!r} is {rows[i][i]}, not 0")
        for j in range(n):
            v = rows[i][j]
            if not math.isfinite(v) or v < 0.0:
                raise NotABMetric(
                    f"entry ({labels[i]!r}, {labels[j]!r}) is {v!r}")
            if i != j and v == 0.0:
                raise NotABMetric(
                    f"distinct labels {labels[i]!r}, {labels[j]!r} at distance 0")
            if v != rows[j][i]:
                raise NotABMetric(
                    f"asymmetry at ({labels[i]!r}, {labels[j]!r}): "
                    f"{v} != {rows[j][i]}")
    for i in range(n):
        for k in range(n):
            for j in range(n):
                lhs = rows[i][j]
                rhs = s * (rows[i][k] + rows[k][j])
                if lhs > rhs * (1.0 + TRIANGLE_SLACK):
                    raise NotABMetric(
                        f"declared s={s} fails at triple "
                        f"({labels[i]!r}, {labels[k]!r}, {labels[j]!r}): "
                        f"{lhs} > {rhs}")

    index = {lab: i for i, lab in enumerate(labels)}
    table = tuple(tuple(r) for r in rows)

    def dist(x: Point, y: Point) -> float:
        return table[index[x]][index[y]]

    return BMetricSpace(
        distance=dist,
        s=s,
        descriptor=DomainDescriptor(
            label=f"discrete_matrix({n} points)",
            sampler=lambda rng: labels[rng.randrange(n)],
        ),
    )


_BUILTIN_KINDS = {"snowflake", "lp_quasinorm", "discrete_matrix"}


def builtin_space(kind: str, **params) -> BMetricSpace:
    """Construct a builtin space by kind name; used by configuration layers."""
    if kind == "snowflake":
        return snowflake(**params)
    if kind == "lp_quasinorm":
        return lp_quasinorm(**params)
    if kind == "discrete_matrix":
        return discrete_matrix(**params)
    raise ParameterError(
        f"unknown space kind {kind!r}; expected one of {sorted(_BUILTIN_KINDS)}")


def load_discrete_space_csv(path, s: Optional[float] = None) -> BMetricSpace:
    """Load a discrete space from a CSV distance table.

    The file holds a header row of point labels followed by the square
    matrix of distances.  The relaxation constant comes either from the `s`
    argument or from a sidecar file at "<path>.s" holding a single number.
    """
    path = Path(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ParameterError(f"{path} is empty")
    labels = [cell.strip() for cell in rows[0]]
    try:
        matrix = [[float(cell) for cell in row] for row in rows[1:]]
    except ValueError as exc:
        raise ParameterError(f"non-numeric matrix entry in {path}: {exc}") from exc
    if s is None:
        sidecar = Path(str(path) + ".s")
        if not sidecar.exists():
            raise ParameterError(
                f"no relaxation constant given and no sidecar file {sidecar}")
        try:
            s = float(sidecar.read_text().strip())
        except ValueError as exc:
            raise ParameterError(f"sidecar {sidecar} is not a number") from exc
    return discrete_matrix(labels, matrix, s)


def save_discrete_space_csv(space_labels: Sequence[str],
                            matrix: Sequence[Sequence[float]],
                            s: float, path) -> None:
    """Write a distance table plus its sidecar relaxation constant."""
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(space_labels))
        for row in matrix:
            writer.writerow([repr(float(v)) for v in row])
    Path(str(path) + ".s").write_text(repr(float(s)) + "\n")


def hausdorff_distance(a: Iterable[Point], b: Iterable[Point],
                       space: BMetricSpace) -> float:
    """Greatest distance from either finite set to the nearest point of the other."""
    a = list(a)
    b = list(b)
    if not a or not b:
        raise EmptySetError("hausdorff_distance needs two non-empty sets")
    forward = max(min(space.d(x, y) for y in b) for x in a)
    backward = max(min(space.d(x, y) for x in a) for y in b)
    return max(forward, backward)
