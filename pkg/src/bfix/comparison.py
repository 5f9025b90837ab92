"""Comparison functions and numeric class-membership evidence.

A comparison function is an increasing self-map phi of [0, inf) whose
iterates phi^[n](r) tend to 0 for every r; it then satisfies phi(r) < r for
r > 0.  Three nested strength classes matter here:

* weighted-summable: sum n**gamma * phi^[n](r) converges for every r;
* power-gap: phi(x) <= x - a*x**alpha near 0 for some a > 0, alpha > 1;
* berinde: b**(n+1)*phi^[n+1](r) <= a*b**n*phi^[n](r) + b_n with (b_n)
  summable, for a fixed a in (0, 1) and b > 1.

Membership is established numerically on finite horizons, so the reports
speak of evidence, never proof.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import DomainError, ParameterError, RangeError
from .series import (
    DEFAULT_CRITERIA,
    EVIDENCE_AGAINST,
    EVIDENCE_FOR,
    INCONCLUSIVE,
    SeriesCriteria,
    series_verdict,
)

# iterates at or above this are treated as "grows without bound"
_BLOWUP = 1e100

# relative slack when comparing float inequalities that can be exactly tight
_SLACK = 1e-12


@dataclass(frozen=True)
class ComparisonFunction:
    """A candidate comparison function with validated evaluation."""

    fn: Callable[[float], float]
    label: str

    def __call__(self, r: float) -> float:
        if r < 0.0:
            raise DomainError(f"{self.label} evaluated at negative input {r}")
        value = self.fn(r)
        if not math.isfinite(value) or value < 0.0:
            raise RangeError(f"{self.label}({r}) returned {value!r}")
        return value


def iterate(phi: ComparisonFunction, n: int, r: float) -> float:
    """n-fold composition phi^[n](r); n = 0 returns r unchanged."""
    if n < 0:
        raise ParameterError(f"iteration count must be >= 0, got {n}")
    if r < 0.0:
        raise DomainError(f"iterate needs r >= 0, got {r}")
    value = r
    for _ in range(n):
        value = phi(value)
    return value


# --- builtin functions -------------------------------------------------

# Exact dyadic constants: 27/64 = 27 * 2**-6 and 27/256 = 27 * 2**-8 are
# both representable floats, so the branch comparison below is exact.
_EXAMPLE_BREAK = 27.0 / 64.0
_EXAMPLE_CAP = 27.0 / 256.0


def _example_fn(x: float) -> float:
    # At the break the two branches agree: 27/64 - (27/64)**(4/3)
    # = 27/64 - 81/256 = 27/256; taking the constant branch at x == 27/64
    # keeps that value exact in floating point.
    if x >= _EXAMPLE_BREAK:
        return _EXAMPLE_CAP
    return x - x ** (4.0 / 3.0)


def example_phi() -> ComparisonFunction:
    """The piecewise function x - x**(4/3) on [0, 27/64], constant 27/256 after.

    Its gap below the identity is exactly x**(4/3) on the power branch, so
    its iterates decay like 27/n**3; that rate separates the weighted-summable
    classes at gamma = 2 and escapes every berinde class.
    """
    return ComparisonFunction(fn=_example_fn, label="example_phi")


def linear(c: float) -> ComparisonFunction:
    """phi(t) = c*t.  A comparison function iff 0 <= c < 1; larger c is
    allowed so the checkers can exhibit counterexamples."""
    if not math.isfinite(c) or c < 0.0:
        raise ParameterError(f"linear coefficient must be >= 0, got {c}")
    return ComparisonFunction(fn=lambda t: c * t, label=f"linear({c:g})")


def quadratic_gap(a: float, alpha: float) -> ComparisonFunction:
    """phi(t) = t - a*t**alpha up to the peak of that expression, constant after.

    The peak sits at t* = (1/(a*alpha))**(1/(alpha-1)); capping keeps the
    function increasing on all of [0, inf).
    """
    if not math.isfinite(a) or a <= 0.0:
        raise ParameterError(f"gap coefficient must be > 0, got {a}")
    if not math.isfinite(alpha) or alpha <= 1.0:
        raise ParameterError(f"gap exponent must be > 1, got {alpha}")
    peak = (1.0 / (a * alpha)) ** (1.0 / (alpha - 1.0))
    cap = max(0.0, peak - a * peak ** alpha)

    def fn(t: float) -> float:
        if t >= peak:
            return cap
        return max(0.0, t - a * t ** alpha)

    return ComparisonFunction(fn=fn, label=f"quadratic_gap({a:g},{alpha:g})")


_FUNCTION_TEMPLATES = {
    "example_phi": (example_phi, 0),
    "linear": (linear, 1),
    "quadratic_gap": (quadratic_gap, 2),
}

_NAME_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def function_from_name(text: str) -> ComparisonFunction:
    """Build a builtin function from a registry name like "linear(0.5)"."""
    m = _NAME_RE.match(text)
    if m is None:
        raise ParameterError(f"cannot parse function name {text!r}")
    name, arg_text = m.group(1), m.group(2)
    if name not in _FUNCTION_TEMPLATES:
        raise ParameterError(
            f"unknown function {name!r}; known: {sorted(_FUNCTION_TEMPLATES)}")
    factory, arity = _FUNCTION_TEMPLATES[name]
    args: list[float] = []
    if arg_text is not None and arg_text.strip():
        try:
            args = [float(piece) for piece in arg_text.split(",")]
        except ValueError as exc:
            raise ParameterError(f"bad arguments in {text!r}: {exc}") from exc
    if len(args) != arity:
        raise ParameterError(
            f"{name} takes {arity} argument(s), got {len(args)} in {text!r}")
    return factory(*args)


def list_function_templates() -> list[str]:
    return ["example_phi", "linear(c)", "quadratic_gap(a,alpha)"]


# --- evidence reports --------------------------------------------------


@dataclass(frozen=True)
class ClassEvidence:
    claim: str
    verdict: str  # evidence-for | evidence-against | inconclusive
    data: dict
    horizon: int


@dataclass(frozen=True)
class AsymptoticReport:
    a: float
    alpha: float
    x0: float
    samples: tuple[tuple[int, float, float], ...]  # (n, x_n, x_n * n**(1/(alpha-1)))
    target: float
    final_relative_error: float


def check_comparison_axioms(phi: ComparisonFunction, r_grid: Sequence[float],
                            horizon: int, tol: float) -> ClassEvidence:
    """Check the defining properties on a grid: monotone, shrinking, decaying.

    Decay is accepted as soon as an iterate falls below tol; an iterate
    reaching 1e100 counts as growth and is reported as a witness.
    """
    grid = list(r_grid)
    if not grid or any(r < 0.0 for r in grid) or sorted(grid) != grid:
        raise ParameterError("r_grid must be non-empty, non-negative, sorted")
    if horizon < 1:
        raise ParameterError(f"horizon must be >= 1, got {horizon}")

    witnesses: dict[str, tuple] = {}
    values = [phi(r) for r in grid]
    for (r1, v1), (r2, v2) in zip(zip(grid, values), zip(grid[1:], values[1:])):
        if v1 > v2:
            witnesses.setdefault("monotone", (r1, r2, v1, v2))
            break
    for r, v in zip(grid, values):
        if r > 0.0 and v >= r:
            witnesses.setdefault("shrink", (r, v))
            break
    worst_final = 0.0
    for r in grid:
        value = r
        for n in range(1, horizon + 1):
            value = phi(value)
            if value >= _BLOWUP:
                witnesses.setdefault("decay", (r, n, value))
                break
            if value < tol:
                break
        else:
            if value >= tol:
                witnesses.setdefault("decay", (r, horizon, value))
        if "decay" in witnesses:
            break
        worst_final = max(worst_final, value)

    verdict = EVIDENCE_FOR if not witnesses else EVIDENCE_AGAINST
    return ClassEvidence(
        claim="comparison-function",
        verdict=verdict,
        data={"witnesses": witnesses, "worst_final_iterate": worst_final,
              "tol": tol},
        horizon=horizon,
    )


def gamma_summability_report(phi: ComparisonFunction, gamma: float, r: float,
                             horizon: int,
                             criteria: SeriesCriteria = DEFAULT_CRITERIA,
                             ) -> ClassEvidence:
    """Evidence for convergence of sum n**gamma * phi^[n](r) over n >= 1.

    Partial sums at the half and full horizon feed the stabilization and
    divergence tests.  Overflow of an iterate or of the sum reads as
    evidence against, with the step recorded as witness.
    """
    if gamma <= 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}")
    if r < 0.0:
        raise DomainError(f"r must be >= 0, got {r}")
    if horizon < 2:
        raise ParameterError(f"horizon must be >= 2, got {horizon}")

    claim = f"gamma-summable(gamma={gamma:g})"
    half_n = horizon // 2
    s = 0.0
    s_half: Optional[float] = None
    value = r
    for n in range(1, horizon + 1):
        try:
            value = phi(value)
        except RangeError:
            return ClassEvidence(claim, EVIDENCE_AGAINST,
                                 {"overflow_at": n}, horizon)
        if value >= _BLOWUP:
            return ClassEvidence(claim, EVIDENCE_AGAINST,
                                 {"overflow_at": n, "iterate": value}, horizon)
        s += n ** gamma * value
        if not math.isfinite(s):
            return ClassEvidence(claim, EVIDENCE_AGAINST,
                                 {"overflow_at": n, "partial_sum": s}, horizon)
        if n == half_n:
            s_half = s
    verdict = series_verdict(s_half, s, criteria)
    return ClassEvidence(
        claim=claim,
        verdict=verdict,
        data={"s_half": s_half, "s_full": s, "n_half": half_n,
              "rel_change": abs(s - s_half) / max(s_half, 1e-300)
              if s_half is not None else None},
        horizon=horizon,
    )


def power_gap_check(phi: ComparisonFunction, alpha: float, a: float,
                    eps: float, grid_size: int) -> ClassEvidence:
    """Check phi(x) <= x - a*x**alpha on an even grid of [0, eps].

    The bound itself must be non-negative on the grid, otherwise the
    parameters are rejected.  A small relative slack absorbs rounding in
    the power evaluations.
    """
    if alpha <= 1.0:
        raise ParameterError(f"alpha must be > 1, got {alpha}")
    if a <= 0.0:
        raise ParameterError(f"a must be > 0, got {a}")
    if eps <= 0.0:
        raise ParameterError(f"eps must be > 0, got {eps}")
    if grid_size < 2:
        raise ParameterError(f"grid_size must be >= 2, got {grid_size}")

    claim = f"power-gap(alpha={alpha:g}, a={a:g}, eps={eps:g})"
    witness = None
    for j in range(grid_size):
        x = eps * j / (grid_size - 1)
        bound = x - a * x ** alpha
        if bound < 0.0:
            raise ParameterError(
                f"x - a*x**alpha is negative at x={x}; shrink eps")
        lhs = phi(x)
        if lhs > bound + _SLACK * (bound + x):
            witness = (x, lhs, bound)
            break
    return ClassEvidence(
        claim=claim,
        verdict=EVIDENCE_FOR if witness is None else EVIDENCE_AGAINST,
        data={"witness": witness, "grid_size": grid_size},
        horizon=grid_size,
    )


def _default_checkpoints(n_max: int) -> list[int]:
    points = []
    n = 1
    while n < n_max:
        points.append(n)
        n *= 10
    points.append(n_max)
    return sorted(set(points))


def power_decay_orbit(a: float, alpha: float, x0: float, n_max: int,
                      checkpoints: Optional[Sequence[int]] = None,
                      ) -> AsymptoticReport:
    """Iterate x_{n+1} = x_n - a*x_n**alpha and test the power-law decay rate.

    Orbits of this recursion decay like (a*(alpha-1)*n)**(-1/(alpha-1)), so
    x_n * n**(1/(alpha-1)) approaches the closed-form target
    (1/(a*(alpha-1)))**(1/(alpha-1)).  Scaled samples are recorded at the
    requested checkpoints (decades by default).
    """
    if a <= 0.0:
        raise ParameterError(f"a must be > 0, got {a}")
    if alpha <= 1.0:
        raise ParameterError(f"alpha must be > 1, got {alpha}")
    if n_max < 1:
        raise ParameterError(f"n_max must be >= 1, got {n_max}")
    if x0 < 0.0 or x0 - a * x0 ** alpha < 0.0:
        raise ParameterError(
            f"x0={x0} leaves the admissible range (orbit would go negative)")
    if checkpoints is None:
        checkpoints = _default_checkpoints(n_max)
    else:
        checkpoints = sorted(set(int(c) for c in checkpoints))
        if not checkpoints or checkpoints[0] < 1 or checkpoints[-1] > n_max:
            raise ParameterError("checkpoints must lie in [1, n_max]")

    power = 1.0 / (alpha - 1.0)
    target = (1.0 / (a * (alpha - 1.0))) ** power
    wanted = set(checkpoints)
    samples = []
    x = x0
    for n in range(1, n_max + 1):
        # the true orbit is non-negative; the clamp only absorbs float dust
        x = max(0.0, x - a * x ** alpha)
        if n in wanted:
            samples.append((n, x, x * n ** power))
    final_scaled = samples[-1][2]
    return AsymptoticReport(
        a=a, alpha=alpha, x0=x0,
        samples=tuple(samples),
        target=target,
        final_relative_error=abs(final_scaled - target) / target,
    )


def _check_berinde_params(a: float, b: float, r0: float) -> None:
    if not 0.0 < a < 1.0:
        raise ParameterError(f"a must lie in (0, 1), got {a}")
    if b <= 1.0:
        raise ParameterError(f"b must be > 1, got {b}")
    if r0 < 0.0:
        raise DomainError(f"r0 must be >= 0, got {r0}")


def berinde_min_term(phi: ComparisonFunction, a: float, b: float, r0: float,
                     n: int) -> float:
    """Smallest admissible additive term b_n in the berinde inequality at r0.

    Returns max(0, b**(n+1)*phi^[n+1](r0) - a*b**n*phi^[n](r0)).  If the
    products overflow, the result is reported as infinity, which already
    signals that no summable sequence (b_n) can work.
    """
    _check_berinde_params(a, b, r0)
    if n < 0:
        raise ParameterError(f"n must be >= 0, got {n}")
    x_n = iterate(phi, n, r0)
    x_n1 = phi(x_n)
    value = b ** (n + 1) * x_n1 - a * b ** n * x_n
    if math.isnan(value):
        return math.inf
    return max(0.0, value)


def berinde_min_term_profile(phi: ComparisonFunction, a: float, b: float,
                             r0: float, n_max: int) -> list[float]:
    """berinde_min_term for every n in [0, n_max], sharing one iterate pass."""
    _check_berinde_params(a, b, r0)
    if n_max < 0:
        raise ParameterError(f"n_max must be >= 0, got {n_max}")
    out = []
    x_n = r0
    weight = 1.0  # b**n
    for _ in range(n_max + 1):
        x_n1 = phi(x_n)
        value = weight * (b * x_n1 - a * x_n)
        out.append(math.inf if math.isnan(value) else max(0.0, value))
        x_n = x_n1
        weight *= b
    return out


def majorization_check(phi: ComparisonFunction, b_seq: Sequence[float],
                       gamma: float, r: float, horizon: int, *,
                       a: Optional[float] = None,
                       eps: Optional[float] = None,
                       criteria: SeriesCriteria = DEFAULT_CRITERIA,
                       ) -> ClassEvidence:
    """Step-majorization route to weighted summability.

    Verifies phi^[n+1](r) <= a_n * phi^[n](r) + b_n for n = 1..horizon and
    then applies the series evidence test to the weighted remainder sums.
    Exactly one of the keyword modes must be chosen:

    * a: constant factor a_n = a with a in (0, 1); the tested series is
      sum n**gamma * b_n.
    * eps: power factor a_n = ((n-1)/n)**(eps+1+gamma) (the n = 1 factor is
      0 by the 0**x = 0 convention); the tested series is
      sum b_n * n**(eps+1+gamma).

    b_seq supplies b_n for n = 1, 2, ...; the effective horizon is capped by
    its length.  A premise violation yields evidence-against with witness n.
    """
    if (a is None) == (eps is None):
        raise ParameterError("choose exactly one mode: a=... or eps=...")
    if a is not None and not 0.0 < a < 1.0:
        raise ParameterError(f"constant factor a must lie in (0, 1), got {a}")
    if eps is not None and eps <= 0.0:
        raise ParameterError(f"power offset eps must be > 0, got {eps}")
    if gamma <= 0.0:
        raise ParameterError(f"gamma must be > 0, got {gamma}")
    if r < 0.0:
        raise DomainError(f"r must be >= 0, got {r}")
    if horizon < 2:
        raise ParameterError(f"horizon must be >= 2, got {horizon}")
    b_list = [float(v) for v in b_seq]
    if any(not math.isfinite(v) or v <= 0.0 for v in b_list):
        raise ParameterError("b_seq entries must be positive and finite")

    h = min(horizon, len(b_list))
    if h < 2:
        raise ParameterError("need at least two usable b_seq entries")
    claim = f"gamma-summable(gamma={gamma:g})"
    mode = f"constant_a({a:g})" if a is not None else f"power(eps={eps:g})"

    # premise: one-step majorization along the iterates of r
    witness = None
    x_n = phi(r)  # phi^[1](r)
    for n in range(1, h + 1):
        x_n1 = phi(x_n)
        if a is not None:
            factor = a
        else:
            factor = 0.0 if n == 1 else ((n - 1) / n) ** (eps + 1.0 + gamma)
        rhs = factor * x_n + b_list[n - 1]
        if x_n1 > rhs * (1.0 + _SLACK):
            witness = (n, x_n1, rhs)
            break
        x_n = x_n1

    # series test on the weighted b_n
    exponent = gamma if a is not None else eps + 1.0 + gamma
    s = 0.0
    s_half = None
    for n in range(1, h + 1):
        s += b_list[n - 1] * n ** exponent
        if n == h // 2:
            s_half = s
    series = series_verdict(s_half, s, criteria)

    if witness is not None:
        verdict = EVIDENCE_AGAINST
    elif series == EVIDENCE_FOR:
        verdict = EVIDENCE_FOR
    elif series == EVIDENCE_AGAINST:
        verdict = EVIDENCE_AGAINST
    else:
        verdict = INCONCLUSIVE
    return ClassEvidence(
        claim=claim,
        verdict=verdict,
        data={"mode": mode, "premise_witness": witness,
              "series_verdict": series, "s_half": s_half, "s_full": s},
        horizon=h,
    )


def berinde_membership_check(phi: ComparisonFunction, a: float, b: float,
                             b_seq: Sequence[float], gamma: float, r: float,
                             horizon: int,
                             criteria: SeriesCriteria = DEFAULT_CRITERIA,
                             ) -> ClassEvidence:
    """Berinde-class route to weighted summability.

    First rejects b_seq unless its plain partial sums pass the stabilization
    test (the class requires a summable additive sequence).  Then checks the
    berinde inequality with the supplied terms for n = 0..horizon-1 and, on
    success, reduces to majorization_check with constant factor a/b and the
    transformed sequence b_n / b**(n+1).
    """
    _check_berinde_params(a, b, r)
    b_list = [float(v) for v in b_seq]
    if len(b_list) < 4:
        raise ParameterError("b_seq must supply at least 4 terms")
    if any(not math.isfinite(v) or v <= 0.0 for v in b_list):
        raise ParameterError("b_seq entries must be positive and finite")

    prefix = 0.0
    prefix_half = None
    for i, v in enumerate(b_list):
        prefix += v
        if i + 1 == len(b_list) // 2:
            prefix_half = prefix
    if series_verdict(prefix_half, prefix, criteria) == EVIDENCE_AGAINST:
        raise ParameterError(
            "b_seq must be summable; its partial sums still grow at the "
            f"horizon (S_half={prefix_half:g}, S_full={prefix:g})")

    claim = f"gamma-summable(gamma={gamma:g})"
    h = min(horizon, len(b_list))
    witness = None
    x_n = r  # phi^[0](r)
    weight = 1.0  # b**n
    for n in range(h):
        x_n1 = phi(x_n)
        lhs = weight * b * x_n1
        rhs = a * weight * x_n + b_list[n]
        if lhs > rhs * (1.0 + _SLACK):
            witness = (n, lhs, rhs)
            break
        x_n = x_n1
        weight *= b
    if witness is not None:
        return ClassEvidence(
            claim=claim,
            verdict=EVIDENCE_AGAINST,
            data={"via": f"berinde(b={b:g})", "inequality_witness": witness},
            horizon=h,
        )

    # reduction: divide the inequality at index n by b**(n+1)
    transformed = [b_list[n] / b ** (n + 1) for n in range(1, len(b_list))]
    inner = majorization_check(phi, transformed, gamma, r, horizon,
                               a=a / b, criteria=criteria)
    data = dict(inner.data)
    data["via"] = f"berinde(b={b:g})"
    return ClassEvidence(claim=claim, verdict=inner.verdict, data=data,
                         horizon=inner.horizon)
