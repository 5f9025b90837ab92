"""Deterministic desk-scale experiments with CSV and JSON reports.

Each experiment is a named, seeded, pure computation configured by one
JSON document.  Running one produces a fixed-column row table (rows.csv)
and a verdict map (verdicts.json).  Boolean verdicts are assertions: a
run passes iff all of them are true.  Identical config and seed give
byte-identical rows.csv; per-trial seeds derive from the master seed in
a fixed order, so trial results never depend on execution interleaving.
"""
from __future__ import annotations

import csv
import json
import math
import random
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .cauchy import tail_bound, telescope_bound_check, trace_from_points
from .comparison import (
    berinde_min_term_profile,
    function_from_name,
    gamma_summability_report,
    power_decay_orbit,
)
from .errors import ConfigError, ParameterError
from .multivalued import (
    always_admissible,
    certify_hypotheses,
    is_fixed_point,
    multimap_from_name,
    multivalued_solve,
)
from .series import EVIDENCE_AGAINST, EVIDENCE_FOR
from .solvers import (
    apriori_error,
    boyd_wong_solve,
    caristi_solve,
    uniqueness_probe,
)
from .spaces import BMetricSpace, builtin_space, verify_b_metric_axioms


# --- self-map and potential registries ---------------------------------

_CALL_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$")


def _parse_call(text: str) -> tuple[str, list[float]]:
    match = _CALL_RE.match(text)
    if match is None:
        raise ParameterError(f"cannot parse template call {text!r}")
    args: list[float] = []
    body = match.group(2)
    if body is not None and body.strip():
        for part in body.split(","):
            try:
                args.append(float(part))
            except ValueError:
                raise ParameterError(
                    f"non-numeric argument {part.strip()!r} in {text!r}") from None
    return match.group(1), args


def _scale_map(c: float) -> Callable[[float], float]:
    return lambda x: c * x


def _shift_map(c: float) -> Callable[[float], float]:
    return lambda x: x + c


def _abs_scale_potential(c: float) -> Callable[[float], float]:
    return lambda x: c * abs(x)


_MAP_TEMPLATES: dict[str, tuple[Callable, int]] = {
    "scale": (_scale_map, 1),
    "shift": (_shift_map, 1),
}
_POTENTIAL_TEMPLATES: dict[str, tuple[Callable, int]] = {
    "abs_scale": (_abs_scale_potential, 1),
}


def _from_registry(text: str, registry: dict, what: str) -> Callable:
    name, args = _parse_call(text)
    if name not in registry:
        known = ", ".join(sorted(registry))
        raise ParameterError(f"unknown {what} {text!r}; known: {known}")
    maker, arity = registry[name]
    if len(args) != arity:
        raise ParameterError(
            f"{what} {name!r} takes {arity} argument(s), got {len(args)}")
    return maker(*args)


def map_from_name(text: str) -> Callable[[float], float]:
    """Build a registered self-map of the line, e.g. "scale(0.5)"."""
    return _from_registry(text, _MAP_TEMPLATES, "map")


def potential_from_name(text: str) -> Callable[[float], float]:
    """Build a registered potential function, e.g. "abs_scale(2)"."""
    return _from_registry(text, _POTENTIAL_TEMPLATES, "potential")


def list_map_templates() -> list[str]:
    return ["scale(c)", "shift(c)"]


def list_potential_templates() -> list[str]:
    return ["abs_scale(c)"]


# --- configuration ------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    parameters: dict
    output_path: Optional[str] = None
    seed: int = 0


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    verdicts: dict
    runtime_seconds: float
    passed: bool

    def write(self, out_dir) -> tuple[Path, Path]:
        """Write rows.csv and verdicts.json under out_dir; returns both paths."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        rows_path = out / "rows.csv"
        with open(rows_path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_cell(v) for v in row])
        verdicts_path = out / "verdicts.json"
        payload = {
            "experiment": self.config.experiment,
            "seed": self.config.seed,
            "passed": self.passed,
            "runtime_seconds": self.runtime_seconds,
            "verdicts": self.verdicts,
        }
        verdicts_path.write_text(json.dumps(payload, indent=2, sort_keys=True)
                                 + "\n")
        return rows_path, verdicts_path


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


@dataclass(frozen=True)
class ExperimentDef:
    name: str
    description: str
    columns: tuple[str, ...]
    defaults: dict
    required: tuple[str, ...]
    runner: Callable[[dict, random.Random], tuple[list, dict]]
    extra_validate: Optional[Callable[[dict, list], None]] = None


EXPERIMENTS: dict[str, ExperimentDef] = {}


def _register(defn: ExperimentDef) -> None:
    EXPERIMENTS[defn.name] = defn


def list_experiments() -> list[ExperimentDef]:
    return [EXPERIMENTS[name] for name in sorted(EXPERIMENTS)]


def validate_config(raw) -> ExperimentConfig:
    """Parse a raw config document, apply defaults, reject unknown keys.

    All detected problems are reported together in a single ConfigError.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    problems: list[str] = []
    allowed_top = {"experiment", "parameters", "output_path", "seed"}
    for key in raw:
        if key not in allowed_top:
            problems.append(f"unknown key {key!r}")

    name = raw.get("experiment")
    defn = None
    if name is None:
        problems.append("missing 'experiment'")
    elif not isinstance(name, str) or name not in EXPERIMENTS:
        known = ", ".join(sorted(EXPERIMENTS))
        problems.append(f"unknown experiment {name!r}; known: {known}")
    else:
        defn = EXPERIMENTS[name]

    params_raw = raw.get("parameters", {})
    if not isinstance(params_raw, dict):
        problems.append("'parameters' must be an object")
        params_raw = {}

    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or not (
            0 <= seed < 2 ** 64):
        problems.append("'seed' must be an integer in [0, 2**64)")
        seed = 0

    output_path = raw.get("output_path")
    if output_path is not None and not isinstance(output_path, str):
        problems.append("'output_path' must be a string")
        output_path = None

    params: dict = {}
    if defn is not None:
        allowed = set(defn.defaults) | set(defn.required)
        for key in params_raw:
            if key not in allowed:
                problems.append(
                    f"unknown parameter {key!r} for experiment {defn.name!r}")
        params = dict(defn.defaults)
        params.update({k: v for k, v in params_raw.items() if k in allowed})
        for key in defn.required:
            if key not in params_raw:
                problems.append(
                    f"experiment {defn.name!r} requires parameter {key!r}")
        if defn.extra_validate is not None:
            defn.extra_validate(params, problems)

    if problems:
        raise ConfigError("; ".join(problems))
    return ExperimentConfig(experiment=name, parameters=params,
                            output_path=output_path, seed=seed)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return validate_config(raw)


def run_experiment(config: ExperimentConfig,
                   out_dir=None) -> ExperimentReport:
    """Run a validated config; optionally write rows.csv and verdicts.json.

    The output directory is out_dir if given, else the config's
    output_path, else nothing is written.
    """
    if config.experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {config.experiment!r}")
    defn = EXPERIMENTS[config.experiment]
    rng = random.Random(config.seed)
    started = time.perf_counter()
    rows, verdicts = defn.runner(dict(config.parameters), rng)
    runtime = time.perf_counter() - started
    passed = all(v for v in verdicts.values() if isinstance(v, bool))
    report = ExperimentReport(
        config=config,
        columns=defn.columns,
        rows=tuple(tuple(r) for r in rows),
        verdicts=verdicts,
        runtime_seconds=runtime,
        passed=passed,
    )
    target = out_dir if out_dir is not None else config.output_path
    if target is not None:
        report.write(target)
    return report


# --- shared helpers -----------------------------------------------------


def _space_from(desc, problems: Optional[list] = None,
                where: str = "space") -> Optional[BMetricSpace]:
    if not isinstance(desc, dict) or "kind" not in desc:
        message = f"{where} must be an object with a 'kind' key"
        if problems is None:
            raise ConfigError(message)
        problems.append(message)
        return None
    kwargs = {k: v for k, v in desc.items() if k != "kind"}
    try:
        return builtin_space(desc["kind"], **kwargs)
    except (ParameterError, TypeError) as exc:
        message = f"{where}: {exc}"
        if problems is None:
            raise ConfigError(message) from exc
        problems.append(message)
        return None


def _check_template(text, maker: Callable[[str], object], what: str,
                    problems: list) -> None:
    if not isinstance(text, str):
        problems.append(f"{what} must be a string")
        return
    try:
        maker(text)
    except ParameterError as exc:
        problems.append(f"{what}: {exc}")


# --- experiment: axioms -------------------------------------------------

_DEFAULT_SPACE_ROSTER = (
    {"kind": "snowflake", "q": 1.0},
    {"kind": "snowflake", "q": 2.0},
    {"kind": "lp_quasinorm", "p": 0.5, "dim": 2},
)


def _validate_axioms(params: dict, problems: list) -> None:
    spaces = params.get("spaces")
    if not isinstance(spaces, (list, tuple)) or not spaces:
        problems.append("'spaces' must be a non-empty list of space objects")
        return
    for i, desc in enumerate(spaces):
        _space_from(desc, problems, where=f"spaces[{i}]")


def _run_axioms(params: dict, rng: random.Random) -> tuple[list, dict]:
    samples = int(params["samples"])
    eq_tol = float(params["eq_tol"])
    rows = []
    verdicts: dict = {}
    all_ok = True
    for desc in params["spaces"]:
        space = _space_from(desc)
        pts = space.sample(samples, random.Random(rng.getrandbits(64)))
        report = verify_b_metric_axioms(space, pts, eq_tol=eq_tol)
        label = space.descriptor.label
        rows.append([label, space.s, report.pairs_checked,
                     report.triples_checked, len(report.violations)])
        verdicts[f"axioms_pass.{label}"] = report.passed
        all_ok = all_ok and report.passed
    verdicts["all_axioms_pass"] = all_ok
    return rows, verdicts


_register(ExperimentDef(
    name="axioms",
    description=("Sample points in each configured space and exhaustively "
                 "check identity, symmetry, and the relaxed triangle "
                 "inequality over all pairs and triples."),
    columns=("space", "s", "pairs_checked", "triples_checked", "violations"),
    defaults={"spaces": list(_DEFAULT_SPACE_ROSTER), "samples": 40,
              "eq_tol": 0.0},
    required=(),
    runner=_run_axioms,
    extra_validate=_validate_axioms,
))


# --- experiment: lemma41 ------------------------------------------------


def _run_power_decay(params: dict, rng: random.Random) -> tuple[list, dict]:
    report = power_decay_orbit(
        a=float(params["a"]), alpha=float(params["alpha"]),
        x0=float(params["x0"]), n_max=int(params["n_max"]),
        checkpoints=params["checkpoints"],
    )
    rows = [[n, x, scaled] for n, x, scaled in report.samples]
    errors = [abs(scaled - report.target) / report.target
              for _, _, scaled in report.samples]
    monotone = all(e2 < e1 for e1, e2 in zip(errors, errors[1:]))
    threshold = float(params["rel_err_max"])
    verdicts = {
        "target": report.target,
        "final_rel_err": report.final_relative_error,
        "final_rel_err_below_threshold":
            report.final_relative_error < threshold,
        "monotone_improvement": monotone,
    }
    return rows, verdicts


_register(ExperimentDef(
    name="lemma41",
    description=("Iterate x <- x - a*x**alpha and check that the scaled "
                 "iterate x_n * n**(1/(alpha-1)) approaches its closed-form "
                 "limit, improving monotonically across checkpoints."),
    columns=("n", "x_n", "x_scaled"),
    defaults={"a": 1.0, "alpha": 4.0 / 3.0, "x0": 0.1, "n_max": 100000,
              "checkpoints": [100, 1000, 10000, 100000],
              "rel_err_max": 0.05},
    required=(),
    runner=_run_power_decay,
))


# --- experiment: gamma-sweep --------------------------------------------


def _validate_gamma_sweep(params: dict, problems: list) -> None:
    _check_template(params.get("phi"), function_from_name, "phi", problems)
    gammas = params.get("gammas")
    if not isinstance(gammas, (list, tuple)) or not gammas:
        problems.append("'gammas' must be a non-empty list of numbers")


def _run_gamma_sweep(params: dict, rng: random.Random) -> tuple[list, dict]:
    phi = function_from_name(params["phi"])
    horizon = int(params["horizon"])
    r = float(params["r"])
    rows = []
    low_ok = True
    high_ok = True
    for gamma in params["gammas"]:
        gamma = float(gamma)
        report = gamma_summability_report(phi, gamma, r, horizon)
        rows.append([gamma, report.data.get("s_half"),
                     report.data.get("s_full"),
                     report.data.get("rel_change"), report.verdict])
        if gamma < 2.0:
            low_ok = low_ok and report.verdict == EVIDENCE_FOR
        elif gamma > 2.0:
            high_ok = high_ok and report.verdict == EVIDENCE_AGAINST
    verdicts = {
        "evidence_for_below_2": low_ok,
        "evidence_against_above_2": high_ok,
        "verdict_flips_across_2": low_ok and high_ok,
    }
    return rows, verdicts


_register(ExperimentDef(
    name="gamma-sweep",
    description=("Evaluate the weighted-series summability evidence for a "
                 "comparison function across several exponents gamma; the "
                 "builtin example function flips from convergent to "
                 "divergent at gamma = 2."),
    columns=("gamma", "s_half", "s_full", "rel_change", "verdict"),
    defaults={"phi": "example_phi", "gammas": [1.6, 1.8, 2.0, 2.2, 2.5],
              "r": 0.1, "horizon": 200000},
    required=(),
    runner=_run_gamma_sweep,
    extra_validate=_validate_gamma_sweep,
))


# --- experiment: claims -------------------------------------------------


def _validate_claims(params: dict, problems: list) -> None:
    _check_template(params.get("phi"), function_from_name, "phi", problems)


def _run_claims(params: dict, rng: random.Random) -> tuple[list, dict]:
    phi = function_from_name(params["phi"])
    horizon = int(params["horizon"])
    r = float(params["r"])
    rows = []
    summable_ok = True
    for gamma in params["gammas"]:
        gamma = float(gamma)
        report = gamma_summability_report(phi, gamma, r, horizon)
        rows.append(["summability", gamma, report.data.get("s_full"),
                     report.verdict])
        summable_ok = summable_ok and report.verdict == EVIDENCE_FOR

    n_max = int(params["n_max"])
    threshold = float(params["threshold"])
    profile = berinde_min_term_profile(
        phi, a=float(params["a"]), b=float(params["b"]),
        r0=float(params["r0"]), n_max=n_max)
    first_exceed = next(
        (n for n, v in enumerate(profile) if v > threshold), -1)
    for n in [k for k in (1, 10, 100, 1000) if k <= n_max]:
        rows.append(["min-term", float(n), profile[n], ""])
    rows.append(["min-term-first-exceed", float(first_exceed),
                 profile[first_exceed] if first_exceed >= 0 else max(profile),
                 ""])
    verdicts = {
        "summable_at_low_gamma": summable_ok,
        "min_term_exceeds_threshold": first_exceed >= 0,
        "first_exceed_n": float(first_exceed),
    }
    return rows, verdicts


_register(ExperimentDef(
    name="claims",
    description=("Two evidence tables for the builtin example function: "
                 "weighted-series summability below the critical exponent, "
                 "and divergence of the smallest admissible additive terms "
                 "in the geometric-damping inequality."),
    columns=("section", "index", "value", "verdict"),
    defaults={"phi": "example_phi", "gammas": [1.6, 1.8], "r": 0.1,
              "horizon": 200000, "a": 0.99, "b": 1.1, "r0": 0.4,
              "threshold": 1000.0, "n_max": 1000},
    required=(),
    runner=_run_claims,
    extra_validate=_validate_claims,
))


# --- experiment: cauchy-fuzz --------------------------------------------


def _validate_cauchy_fuzz(params: dict, problems: list) -> None:
    _space_from(params.get("space"), problems)
    if params.get("mode") not in ("telescope", "tail", "both"):
        problems.append("'mode' must be one of telescope, tail, both")


def _run_cauchy_fuzz(params: dict, rng: random.Random) -> tuple[list, dict]:
    space = _space_from(params["space"])
    gamma = float(params["gamma"])
    trials = int(params["trials"])
    max_len = int(params["max_len"])
    mode = params["mode"]
    trial_seeds = [rng.getrandbits(64) for _ in range(trials)]

    rows = []
    total_tele_viol = 0
    total_tail_viol = 0
    for t, trial_seed in enumerate(trial_seeds):
        trng = random.Random(trial_seed)
        length = trng.randint(2, max_len)
        pts = space.sample(length, trng)
        trace = trace_from_points(pts, space)
        n_gaps = len(trace.gaps)

        tele_checks = tele_viol = 0
        if mode in ("telescope", "both"):
            n = 0
            while 2 ** n <= 64:
                for k in range(1, min(2 ** n, n_gaps) + 1):
                    check = telescope_bound_check(trace, n, k)
                    tele_checks += 1
                    if check.ok is False:
                        tele_viol += 1
                n += 1

        tail_checks = tail_viol = 0
        if mode in ("tail", "both"):
            for n in range(1, n_gaps):
                est = tail_bound(trace, gamma, n, horizon=n_gaps)
                for m in range(1, n_gaps - n + 1):
                    actual = space.d(pts[n], pts[n + m])
                    tail_checks += 1
                    if actual > est.value:
                        tail_viol += 1

        rows.append([t, length, tele_checks, tele_viol, tail_checks,
                     tail_viol])
        total_tele_viol += tele_viol
        total_tail_viol += tail_viol

    verdicts = {
        "telescope_violations": float(total_tele_viol),
        "tail_violations": float(total_tail_viol),
        "zero_violations": total_tele_viol == 0 and total_tail_viol == 0,
    }
    return rows, verdicts


_register(ExperimentDef(
    name="cauchy-fuzz",
    description=("Generate random finite orbits in a space and check every "
                 "instance of the chained-triangle bound and of the "
                 "weighted tail bound against measured distances."),
    columns=("trial", "length", "telescope_checks", "telescope_violations",
             "tail_checks", "tail_violations"),
    defaults={"space": {"kind": "snowflake", "q": 2.0}, "gamma": 2.0,
              "trials": 1000, "max_len": 64, "mode": "both"},
    required=(),
    runner=_run_cauchy_fuzz,
    extra_validate=_validate_cauchy_fuzz,
))


# --- experiment: solve --------------------------------------------------


def _validate_solve(params: dict, problems: list) -> None:
    solver = params.get("solver")
    if solver not in ("caristi", "boyd-wong"):
        problems.append("'solver' must be 'caristi' or 'boyd-wong'")
        return
    _check_template(params.get("map"), map_from_name, "map", problems)
    if params.get("space") is not None:
        _space_from(params["space"], problems)
    if solver == "caristi":
        _check_template(params.get("potential"), potential_from_name,
                        "potential", problems)
        if not (isinstance(params.get("alpha"), (int, float))
                and params["alpha"] > 1):
            problems.append("'alpha' must be a number > 1")
    else:
        _check_template(params.get("phi"), function_from_name, "phi",
                        problems)
        if params.get("gamma") is None:
            problems.append("experiment 'solve' with solver 'boyd-wong' "
                            "requires parameter 'gamma'")


def _run_solve(params: dict, rng: random.Random) -> tuple[list, dict]:
    solver = params["solver"]
    map_fn = map_from_name(params["map"])
    x0 = float(params["x0"])
    max_iter = int(params["max_iter"])

    if solver == "caristi":
        space = (_space_from(params["space"])
                 if params["space"] is not None else builtin_space(
                     "snowflake", q=1.0))
        report = caristi_solve(
            map_fn, potential_from_name(params["potential"]),
            float(params["alpha"]), x0, space,
            tol=float(params["tol"]), max_iter=max_iter)
        gaps = report.data["gaps"]
        rows = [[n, b, gaps[n] if n < len(gaps) else ""]
                for n, b in enumerate(report.bounds)]
        verdicts = {
            "converged": report.converged,
            "iterations": float(report.iterations),
            "residual": report.residual,
            "no_violations": not report.violations,
            "budget_ok": bool(report.data["budget_ok"]),
            "weighted_gap_sum": report.data["weighted_gap_sum"],
            "budget": report.data["budget"],
        }
    else:
        space = (_space_from(params["space"])
                 if params["space"] is not None else builtin_space(
                     "snowflake", q=2.0))
        report = boyd_wong_solve(
            map_fn, function_from_name(params["phi"]), x0, space,
            gamma=float(params["gamma"]), eps=float(params["eps"]),
            horizon=int(params["horizon"]), max_iter=max_iter)
        gaps = report.data["gaps"]
        rows = [[n, b, gaps[n] if n < len(gaps) else ""]
                for n, b in enumerate(report.bounds, start=1)]
        verdicts = {
            "converged": report.converged,
            "iterations": float(report.iterations),
            "residual": report.residual,
            "no_violations": not report.violations,
            "residual_below_eps": report.residual < float(params["eps"]),
        }

    starts = params["uniqueness_starts"]
    if starts:
        probe = uniqueness_probe(map_fn, space,
                                 [float(v) for v in starts])
        verdicts["uniqueness_agreed"] = probe.agreed
    return rows, verdicts


_register(ExperimentDef(
    name="solve",
    description=("Run a single-valued solver (potential-descent or "
                 "comparison-contraction) on a registered map, tabulating "
                 "the per-iteration error bounds, then probe uniqueness "
                 "from several starts."),
    columns=("n", "bound", "gap"),
    defaults={"space": None, "map": "scale(0.5)", "x0": 1.0,
              "max_iter": 100000,
              "potential": "abs_scale(2)", "alpha": 1.5, "tol": 1e-9,
              "phi": "linear(0.25)", "gamma": None, "eps": 1e-9,
              "horizon": 60,
              "uniqueness_starts": [-3.0, 0.5, 7.0]},
    required=("solver",),
    runner=_run_solve,
    extra_validate=_validate_solve,
))


# --- experiment: solve-multi --------------------------------------------


def _validate_solve_multi(params: dict, problems: list) -> None:
    _space_from(params.get("space"), problems)
    _check_template(params.get("phi"), function_from_name, "phi", problems)
    _check_template(params.get("multimap"), multimap_from_name, "multimap",
                    problems)


def _run_solve_multi(params: dict, rng: random.Random) -> tuple[list, dict]:
    space = _space_from(params["space"])
    T = multimap_from_name(params["multimap"])
    phi = function_from_name(params["phi"])
    alpha = always_admissible()
    gamma = float(params["gamma"])

    low, high = float(params["pair_low"]), float(params["pair_high"])
    pairs = [(rng.uniform(low, high), rng.uniform(low, high))
             for _ in range(int(params["certify_pairs"]))]
    hyp = certify_hypotheses(space, T, alpha, phi, pairs)

    tol = float(params["tol"])
    report = multivalued_solve(space, T, alpha, phi, gamma,
                               float(params["x0"]), float(params["x1"]),
                               tol=tol, max_iter=int(params["max_iter"]),
                               q=float(params["q"]))
    rows = []
    gaps = (report.certificate.trace.gaps
            if report.certificate is not None else ())
    majorant = gaps[0] if gaps else 0.0
    for n, gap in enumerate(gaps):
        rows.append([n, gap, float(params["q"]) * majorant,
                     report.admissibility_trace[n]])
        majorant = phi(majorant)

    verdicts = {
        "hypotheses_pass": hyp.passed,
        "hypothesis_pairs": float(hyp.pairs_checked),
        "converged": report.converged,
        "iterations": float(report.iterations),
        "residual": report.residual,
        "residual_is_zero": report.residual == 0.0,
        "gap_majorant_ok": report.gap_majorant_ok,
        "limit_admissibility_ok": bool(report.limit_admissibility_ok),
        "fixed_point_verified": is_fixed_point(space, T, report.fixed_point,
                                               tol),
        "cauchy_certified": (report.certificate is not None and
                             report.certificate.verdict == "certified"),
    }
    return rows, verdicts


_register(ExperimentDef(
    name="solve-multi",
    description=("Certify the admissibility and gated-contraction "
                 "hypotheses of a finite-set-valued map on random pairs, "
                 "then drive an orbit to a fixed point, checking the "
                 "per-step gap majorant along the way."),
    columns=("n", "gap", "majorant", "admissibility"),
    defaults={"space": {"kind": "snowflake", "q": 2.0},
              "multimap": "half_third", "phi": "linear(0.25)", "gamma": 2.0,
              "x0": 1.0, "x1": 0.5, "tol": 0.0, "q": 1.0, "max_iter": 10000,
              "certify_pairs": 1000, "pair_low": -2.0, "pair_high": 2.0},
    required=(),
    runner=_run_solve_multi,
    extra_validate=_validate_solve_multi,
))


# --- experiment: error-bound --------------------------------------------


def _validate_error_bound(params: dict, problems: list) -> None:
    _space_from(params.get("space"), problems)
    _check_template(params.get("phi"), function_from_name, "phi", problems)
    _check_template(params.get("map"), map_from_name, "map", problems)


def _run_error_bound(params: dict, rng: random.Random) -> tuple[list, dict]:
    space = _space_from(params["space"])
    phi = function_from_name(params["phi"])
    map_fn = map_from_name(params["map"])
    gamma = float(params["gamma"])
    horizon = int(params["horizon"])
    n_lo, n_hi = int(params["n_lo"]), int(params["n_hi"])

    x = float(params["x0"])
    orbit = [x]
    for _ in range(n_hi):
        x = map_fn(x)
        orbit.append(x)
    limit = orbit[-1]
    for _ in range(int(params["settle_iters"])):
        limit = map_fn(limit)
    d0 = space.d(orbit[0], orbit[1])

    rows = []
    dominates = True
    min_ratio = math.inf
    for n in range(n_lo, n_hi + 1):
        est = apriori_error(phi, d0, space.s, gamma, n, horizon=horizon)
        true_err = space.d(orbit[n], limit)
        ratio = est.value / true_err if true_err > 0.0 else math.inf
        rows.append([n, est.value, true_err, ratio])
        if true_err > est.value:
            dominates = False
        if math.isfinite(ratio):
            min_ratio = min(min_ratio, ratio)
    verdicts = {
        "bound_dominates": dominates,
        "min_ratio": min_ratio if math.isfinite(min_ratio) else -1.0,
        "n_checked": float(n_hi - n_lo + 1),
    }
    return rows, verdicts


_register(ExperimentDef(
    name="error-bound",
    description=("Tabulate the a-priori error bound for a contraction orbit "
                 "against the measured distance to the (numerically "
                 "settled) limit, verifying that the bound dominates the "
                 "truth at every iterate."),
    columns=("n", "bound", "true_error", "ratio"),
    defaults={"space": {"kind": "snowflake", "q": 2.0}, "map": "scale(0.5)",
              "phi": "linear(0.25)", "gamma": 2.0, "x0": 1.0,
              "n_lo": 1, "n_hi": 40, "horizon": 60, "settle_iters": 400},
    required=(),
    runner=_run_error_bound,
))
