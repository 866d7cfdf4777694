"""Config-driven Monte Carlo experiments that recover minimax rates.

An ExperimentSpec names a graph family, a grid of sizes, model parameters
and an estimator; the runners simulate seeded replicates, record the
per-replicate risks ||estimate - truth||_n^2, and fit the log-log slope of
the mean risk against n.  For smooth targets the slope should track the
minimax exponent -2 beta / (2 beta + r).

Reproducibility contract: every replicate derives its RNG streams from
(master seed, n, rep) only, so identical specs produce bit-identical CSVs.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import expit

from .errors import NumericError, ValidationError
from .graphs import Graph, build_grid, build_path, build_small_world, build_torus, load_edge_list
from .pinsker import (
    estimate_classification,
    estimate_regression,
    pinsker_plan,
    projection_estimate,
)
from .sobolev import SobolevSpec, ellipsoid_weights, sample_ball
from .spectral import Spectrum, eigendecompose, fit_geometry, gft_forward, gft_inverse

REGRESSION_ESTIMATORS = ("pinsker", "projection")
CLASSIFICATION_ESTIMATORS = ("classification-direct", "classification-link")

RESULTS_HEADER = "family,n,beta,Q,sigma,r_used,estimator,rep,seed,risk"
AGGREGATE_HEADER = "family,estimator,beta,r_used,slope,stderr,theory_slope"

_ZERO_RISK = 1e-12


@dataclass(frozen=True)
class ExperimentSpec:
    """One rate experiment: graph family, size grid, model, estimator.

    family is "path", "grid:<d>", "torus:<d>", "ws:<k>,<p>" or
    "file:<path>" (the path may contain "{n}", substituted per size).  For
    grid/torus families every n must be a perfect d-th power.  sigma is the
    regression noise level; for classification estimators it sets the
    shrinkage plan's noise scale (0.5 matches the worst-case Bernoulli
    standard deviation).
    """

    family: str
    n_values: tuple[int, ...]
    beta: float
    Q: float
    sigma: float
    estimator: str
    reps: int
    seed: int
    fill: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        if len(self.n_values) < 2:
            raise ValidationError("rate fitting needs at least two sizes in n_values")
        if any(b >= c for b, c in zip(self.n_values, self.n_values[1:])):
            raise ValidationError("n_values must be strictly increasing")
        if self.reps < 1:
            raise ValidationError(f"reps must be >= 1, got {self.reps}")
        if self.estimator not in REGRESSION_ESTIMATORS + CLASSIFICATION_ESTIMATORS:
            raise ValidationError(f"unknown estimator {self.estimator!r}")
        if not 0.0 < self.fill <= 1.0:
            raise ValidationError(f"fill must be in (0, 1], got {self.fill}")
        if self.sigma < 0:
            raise ValidationError(f"sigma must be non-negative, got {self.sigma}")
        _parse_family(self.family)


@dataclass(frozen=True)
class RateReport:
    """Per-replicate risks plus the aggregate rate fit."""

    family: str
    estimator: str
    beta: float
    Q: float
    sigma: float
    fill: float
    seed: int
    rows: tuple[tuple[int, float, int, int, float], ...]  # (n, r_used, rep, seed, risk)
    per_n: tuple[tuple[int, float, float], ...]  # (n, mean risk, std error)
    r_used_final: float
    slope: float
    slope_stderr: float
    theory_slope: float
    note: str = ""


def _parse_family(family: str):
    """Split a family string into (kind, params); raises on bad syntax."""
    if family == "path":
        return "path", None
    kind, _, rest = family.partition(":")
    if kind in ("grid", "torus"):
        try:
            d = int(rest)
        except ValueError:
            raise ValidationError(f"{kind} family needs a dimension, got {family!r}") from None
        if d < 1:
            raise ValidationError(f"{kind} dimension must be >= 1, got {d}")
        return kind, d
    if kind == "ws":
        parts = rest.split(",")
        if len(parts) != 2:
            raise ValidationError(f"ws family needs 'ws:<k>,<p>', got {family!r}")
        try:
            k, p = int(parts[0]), float(parts[1])
        except ValueError:
            raise ValidationError(f"could not parse ws parameters in {family!r}") from None
        return "ws", (k, p)
    if kind == "file":
        if not rest:
            raise ValidationError("file family needs a path")
        return "file", rest
    raise ValidationError(f"unknown graph family {family!r}")


def _side_for(n: int, d: int) -> int:
    side = round(n ** (1.0 / d))
    if side**d != n:
        raise ValidationError(f"n={n} is not a perfect {d}-th power for this family")
    return side


def _build_family_graph(family: str, n: int, seed: int) -> Graph:
    kind, params = _parse_family(family)
    if kind == "path":
        return build_path(n)
    if kind == "grid":
        return build_grid([_side_for(n, params)] * params)
    if kind == "torus":
        return build_torus([_side_for(n, params)] * params)
    if kind == "ws":
        k, p = params
        return build_small_world(n, k, p, seed)
    path = params.replace("{n}", str(n))
    with open(path, "r", encoding="utf-8") as fh:
        g = load_edge_list(fh)
    if g.n != n:
        raise ValidationError(f"edge list {path} has n={g.n}, expected {n}")
    return g


@lru_cache(maxsize=16)
def _family_spectrum(family: str, n: int, seed: int) -> tuple[Graph, Spectrum, float]:
    """Graph, spectrum and the geometry parameter the estimator should use.

    Synthetic families get their known r (1 for paths, d for grids and
    tori); small-world and file graphs get the fitted value, floored at 1.
    Cached because repeated experiment runs share the same decompositions.
    """
    g = _build_family_graph(family, n, seed)
    s = eigendecompose(g)
    kind, params = _parse_family(family)
    if kind == "path":
        r_used = 1.0
    elif kind in ("grid", "torus"):
        r_used = float(params)
    else:
        r_used = max(1.0, fit_geometry(s).r_hat)
    return g, s, r_used


def _rep_seeds(master: int, n: int, rep: int) -> tuple[int, int]:
    state = np.random.SeedSequence((master, n, rep)).generate_state(2, np.uint64)
    return int(state[0]), int(state[1])


def fit_rate(n_values, mean_risks) -> tuple[float, float]:
    """OLS slope of log(mean risk) on log(n), with its standard error.

    The standard error comes from the residual variance; with only two
    points the fit is exact and the error is reported as nan.
    """
    ns = np.asarray(n_values, dtype=float)
    means = np.asarray(mean_risks, dtype=float)
    if len(ns) < 2 or len(np.unique(ns)) < 2:
        raise ValidationError("rate fit needs at least two distinct sizes")
    if np.any(means <= 0.0):
        raise NumericError("degenerate rate fit: non-positive mean risk")
    x = np.log(ns)
    y = np.log(means)
    xc = x - x.mean()
    sxx = float(np.dot(xc, xc))
    slope = float(np.dot(xc, y) / sxx)
    intercept = float(y.mean() - slope * x.mean())
    dof = len(ns) - 2
    if dof == 0:
        return slope, math.nan
    rss = float(np.sum((y - (slope * x + intercept)) ** 2))
    return slope, math.sqrt(rss / dof / sxx)


def _identity_estimate(s: Spectrum, y: np.ndarray) -> np.ndarray:
    return gft_inverse(s, gft_forward(s, y))


def _aggregate(spec: ExperimentSpec, rows, r_used_final) -> RateReport:
    per_n = []
    for n in spec.n_values:
        risks = np.array([row[4] for row in rows if row[0] == n])
        sem = float(risks.std(ddof=1) / math.sqrt(len(risks))) if len(risks) > 1 else 0.0
        per_n.append((n, float(risks.mean()), sem))
    note = ""
    if all(mean < _ZERO_RISK for _, mean, _ in per_n):
        note = "degenerate: zero risk"
        slope, stderr = math.nan, math.nan
    else:
        slope, stderr = fit_rate([p[0] for p in per_n], [p[1] for p in per_n])
    theory = -2.0 * spec.beta / (2.0 * spec.beta + r_used_final)
    return RateReport(
        family=spec.family,
        estimator=spec.estimator,
        beta=spec.beta,
        Q=spec.Q,
        sigma=spec.sigma,
        fill=spec.fill,
        seed=spec.seed,
        rows=tuple(rows),
        per_n=tuple(per_n),
        r_used_final=r_used_final,
        slope=slope,
        slope_stderr=stderr,
        theory_slope=theory,
        note=note,
    )


def run_regression_experiment(spec: ExperimentSpec) -> RateReport:
    """Simulate Y = f + sigma * noise over the size grid and fit the rate."""
    if spec.estimator not in REGRESSION_ESTIMATORS:
        raise ValidationError(f"regression runner got estimator {spec.estimator!r}")
    rows = []
    r_used_final = 1.0
    for n in spec.n_values:
        try:
            _, s, r_used = _family_spectrum(spec.family, n, spec.seed)
            r_used_final = r_used
            ball = SobolevSpec(beta=spec.beta, Q=spec.Q, r=r_used)
            plan = None
            if spec.estimator == "pinsker" and spec.sigma > 0:
                plan = pinsker_plan(ellipsoid_weights(s, ball), spec.sigma, n)
            m = max(1, min(n, round(n ** (r_used / (2.0 * spec.beta + r_used)))))
            for rep in range(spec.reps):
                ball_seed, noise_seed = _rep_seeds(spec.seed, n, rep)
                f = sample_ball(s, ball, spec.fill, ball_seed)
                y = f + spec.sigma * np.random.default_rng(noise_seed).standard_normal(n)
                if spec.estimator == "projection":
                    fhat = projection_estimate(s, y, m)
                elif plan is None:  # pinsker in the noiseless limit
                    fhat = _identity_estimate(s, y)
                else:
                    fhat = estimate_regression(s, plan, y)
                risk = float(np.mean((fhat - f) ** 2))
                rows.append((n, r_used, rep, ball_seed, risk))
        except (ValidationError, NumericError) as exc:
            raise type(exc)(f"{exc} (family={spec.family}, n={n})") from exc
    return _aggregate(spec, rows, r_used_final)


def run_classification_experiment(spec: ExperimentSpec) -> RateReport:
    """Simulate Bernoulli labels with sigmoid soft labels and fit the rate."""
    if spec.estimator not in CLASSIFICATION_ESTIMATORS:
        raise ValidationError(f"classification runner got estimator {spec.estimator!r}")
    if not spec.sigma > 0:
        raise ValidationError("classification needs a positive plan noise scale sigma")
    mode = "direct" if spec.estimator == "classification-direct" else "link"
    rows = []
    r_used_final = 1.0
    warned = False
    for n in spec.n_values:
        try:
            _, s, r_used = _family_spectrum(spec.family, n, spec.seed)
            r_used_final = r_used
            if spec.beta < r_used / 2.0 and not warned:
                warnings.warn(
                    f"beta={spec.beta} is below r/2={r_used / 2.0}: outside the regime "
                    "where the classification rate is established",
                    RuntimeWarning,
                    stacklevel=2,
                )
                warned = True
            ball = SobolevSpec(beta=spec.beta, Q=spec.Q, r=r_used)
            plan = pinsker_plan(ellipsoid_weights(s, ball), spec.sigma, n)
            for rep in range(spec.reps):
                ball_seed, noise_seed = _rep_seeds(spec.seed, n, rep)
                rho = expit(sample_ball(s, ball, spec.fill, ball_seed))
                labels = (
                    np.random.default_rng(noise_seed).random(n) < rho
                ).astype(float)
                rho_hat = estimate_classification(s, plan, labels, mode=mode)
                risk = float(np.mean((rho_hat - rho) ** 2))
                rows.append((n, r_used, rep, ball_seed, risk))
        except (ValidationError, NumericError) as exc:
            raise type(exc)(f"{exc} (family={spec.family}, n={n})") from exc
    return _aggregate(spec, rows, r_used_final)


def run_experiment(spec: ExperimentSpec) -> RateReport:
    """Dispatch to the regression or classification runner by estimator."""
    if spec.estimator in REGRESSION_ESTIMATORS:
        return run_regression_experiment(spec)
    return run_classification_experiment(spec)


def results_csv_text(report: RateReport) -> str:
    """Per-replicate rows, ascending n then rep."""
    lines = [RESULTS_HEADER]
    for n, r_used, rep, seed, risk in report.rows:
        lines.append(
            f"{report.family},{n},{report.beta:.12g},{report.Q:.12g},"
            f"{report.sigma:.12g},{r_used:.12g},{report.estimator},{rep},{seed},{risk:.12g}"
        )
    return "\n".join(lines) + "\n"


def aggregate_csv_text(report: RateReport) -> str:
    """Single aggregate row with the fitted and theoretical slopes."""
    line = (
        f"{report.family},{report.estimator},{report.beta:.12g},"
        f"{report.r_used_final:.12g},{report.slope:.12g},{report.slope_stderr:.12g},"
        f"{report.theory_slope:.12g}"
    )
    return AGGREGATE_HEADER + "\n" + line + "\n"
