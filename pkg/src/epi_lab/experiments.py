"""Batch drivers behind the command line: counterexample sweep, bound suites, lemma fuzz.

Work items run on a bounded thread pool (``EPI_LAB_THREADS`` caps it) and
results are gathered in submission order, so output does not depend on the
number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
import json
import math
import os
from pathlib import Path

from scipy import special

from . import bounds
from .densities import DEFAULT_CONFIG, curvature_region_mass, gaussian_absolute_moment, mixture_counterexample
from .entropy import epi_deficit
from .errors import DomainError, EpiLabError
from .psd import lemma_fuzz
from .specs import DensitySpec
from .transport import gaussian_fit_w2

__all__ = [
    "worker_count",
    "holder_minimizer_limit",
    "holder_bound_limit",
    "holder_bound",
    "SweepRow",
    "SweepResult",
    "run_counterexample",
    "SUITES",
    "SuiteResult",
    "load_suite",
    "run_bound_suite",
    "run_lemma_fuzz",
]

DEFAULT_EPS = (0.1, 0.03, 0.01, 0.003, 0.001)
DEFAULT_T_LIST = (0.1, 0.3, 0.5, 0.7, 0.9)
# E|Z|^3 for a standard normal
GAUSS_M3 = gaussian_absolute_moment(1.0, 3.0)


def worker_count(tasks):
    """Pool size: ``EPI_LAB_THREADS`` if set, else the CPU count, never more than ``tasks``."""
    env = os.environ.get("EPI_LAB_THREADS")
    if env is not None:
        try:
            cap = int(env)
        except ValueError:
            raise DomainError(f"EPI_LAB_THREADS must be an integer, got {env!r}") from None
        if cap < 1:
            raise DomainError("EPI_LAB_THREADS must be >= 1")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, tasks))


def _map(fn, items):
    items = list(items)
    if not items:
        return []
    n = worker_count(len(items))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# -- counterexample sweep ---------------------------------------------------

def holder_minimizer_limit():
    """``(2/pi) Gamma(5/4)^{4/3}``: minimizing Gaussian variance of the limiting Hoelder bound."""
    return 2.0 / math.pi * special.gamma(1.25) ** (4.0 / 3.0)


def holder_bound_limit():
    """``1 - (2/pi) Gamma(5/4)^{4/3}``: the Hoelder lower bound on dW2^2 as eps -> 0."""
    return 1.0 - holder_minimizer_limit()


def holder_bound(d):
    """Minimum over ``s`` of ``s + m2 - 2 m_{3/2}(d)^{2/3} m_3(gamma_s)^{1/3}``.

    With ``m_3(gamma_s)^{1/3} = sqrt(s) * k`` the expression is quadratic in
    ``sqrt(s)``.  Returns ``(s_min, bound)``.
    """
    a = d.absolute_moment(1.5) ** (2.0 / 3.0)
    k = GAUSS_M3 ** (1.0 / 3.0)
    root = a * k
    return root * root, d.second_moment - root * root


@dataclass(frozen=True)
class SweepRow:
    eps: float
    deficit: float
    omega_mass: float
    dW2_sq: float
    holder_bound: float
    holder_s: float


@dataclass(frozen=True)
class SweepResult:
    """Counterexample sweep rows in descending ``eps``; no timing, so output is reproducible."""

    t: float
    grid_points: int
    rows: tuple
    holder_limit: float = field(default_factory=holder_bound_limit)
    holder_s_limit: float = field(default_factory=holder_minimizer_limit)

    COLUMNS = ("eps", "t", "grid_points", "deficit", "omega_mass", "dW2_sq", "holder_bound", "holder_s")

    def table(self):
        return [
            (r.eps, self.t, self.grid_points, r.deficit, r.omega_mass, r.dW2_sq, r.holder_bound, r.holder_s)
            for r in self.rows
        ]

    def to_csv(self):
        lines = [",".join(self.COLUMNS)]
        for row in self.table():
            lines.append(",".join(str(v) if isinstance(v, int) else repr(float(v)) for v in row))
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "t": self.t,
            "grid_points": self.grid_points,
            "holder_limit": self.holder_limit,
            "holder_s_limit": self.holder_s_limit,
            "rows": [dict(zip(self.COLUMNS, row)) for row in self.table()],
        }


def _sweep_row(eps, t, cfg):
    d = mixture_counterexample(eps)
    s_min, hb = holder_bound(d)
    return SweepRow(
        eps=float(eps),
        deficit=epi_deficit(d, d, t, cfg).deficit,
        omega_mass=curvature_region_mass(d, 1.0, cfg),
        dW2_sq=gaussian_fit_w2(d, cfg)[1],
        holder_bound=hb,
        holder_s=s_min,
    )


def run_counterexample(eps_list=DEFAULT_EPS, t=0.5, cfg=DEFAULT_CONFIG):
    """Deficit, curvature-region mass, Gaussian distance and Hoelder bound of the mixture family."""
    eps_list = sorted({float(e) for e in eps_list}, reverse=True)
    if not eps_list:
        raise DomainError("need at least one eps")
    if any(not 0.0 < e <= 0.5 for e in eps_list):
        raise DomainError("eps values must lie in (0, 1/2]")
    if not 0.0 < t < 1.0:
        raise DomainError("t must lie in (0, 1)")
    rows = _map(lambda e: _sweep_row(e, t, cfg), eps_list)
    return SweepResult(t=float(t), grid_points=cfg.grid_points, rows=tuple(rows))


# -- bound suites -----------------------------------------------------------

SUITES = {
    # uniformly log-concave family; thm1 / cor2 / cor3 / rioul per t, cor4 per pair
    "default": {
        "kind": "pairs",
        "pairs": [list(p) for p in combinations_with_replacement(
            ["gaussian:var=0.5", "gaussian:var=1", "gaussian:var=2", "quartic:a=0.05", "quartic:a=0.2"], 2)],
    },
    "gaussian": {
        "kind": "pairs",
        "pairs": [list(p) for p in combinations_with_replacement(["gaussian:var=0.5", "gaussian:var=1", "gaussian:var=4"], 2)],
    },
    # log-concave densities against the standard Gaussian; thm5 / prop8 / twosided
    "growth": {
        "kind": "growth",
        "pairs": [[d, "gaussian:var=1"] for d in
                  ["gaussian:var=0.5", "gaussian:var=2", "gaussian:var=4", "laplace:scale=1",
                   "quartic:a=0.05", "quartic:a=0.2"]],
    },
}


def load_suite(name_or_path):
    """A named suite, or a JSON file ``{"kind": "pairs"|"growth", "pairs": [[mu, nu], ...]}``.

    A bare JSON list of pairs is read as kind ``pairs``.
    """
    if name_or_path in SUITES:
        return SUITES[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise DomainError(f"unknown suite {name_or_path!r}; expected one of {sorted(SUITES)} or a JSON file")
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, list):
        data = {"kind": "pairs", "pairs": data}
    if data.get("kind", "pairs") not in ("pairs", "growth"):
        raise DomainError("suite kind must be 'pairs' or 'growth'")
    pairs = data.get("pairs", [])
    if not all(isinstance(p, list) and len(p) == 2 and all(isinstance(s, str) for s in p) for p in pairs):
        raise DomainError("suite pairs must be a list of [mu_spec, nu_spec] string pairs")
    return {"kind": data.get("kind", "pairs"), "pairs": pairs}


@dataclass(frozen=True)
class SuiteResult:
    reports: list
    errors: list

    @property
    def exit_code(self):
        return 0 if all(r["holds"] for r in self.reports) else 1

    def failures(self):
        return [r for r in self.reports if not r["holds"]]

    def to_json(self):
        return json.dumps(self.reports, indent=2, sort_keys=True) + "\n"

    CSV_COLUMNS = ("mu", "nu", "inequality", "lhs", "rhs", "margin", "holds", "empirical_constant", "degenerate",
                   "parameters")

    def to_csv(self):
        lines = [",".join(self.CSV_COLUMNS)]
        for r in self.reports:
            cells = []
            for col in self.CSV_COLUMNS:
                v = r[col]
                if col == "parameters":
                    cells.append('"' + json.dumps(v, sort_keys=True).replace('"', '""') + '"')
                elif v is None:
                    cells.append("")
                elif isinstance(v, bool):
                    cells.append("true" if v else "false")
                elif isinstance(v, float):
                    cells.append(repr(v))
                else:
                    cells.append(str(v))
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def _pair_reports(job, cfg):
    kind, mu_text, nu_text, t = job
    mu_spec, nu_spec = DensitySpec.parse(mu_text), DensitySpec.parse(nu_text)
    d1, d2 = mu_spec.build(), nu_spec.build()
    out = []
    if kind == "pairs":
        if t is None:
            out.append(bounds.cor4_check(d1, d2, bounds.certified_eta(d1, cfg), bounds.certified_eta(d2, cfg), cfg))
        else:
            eta = min(bounds.certified_eta(d1, cfg), bounds.certified_eta(d2, cfg))
            deficit = epi_deficit(d1, d2, t, cfg).deficit
            out.append(bounds.thm1_check(d1, d2, t, eta, cfg, deficit=deficit))
            out.append(bounds.cor2_check(d1, d2, t, eta, cfg))
            out.append(bounds.cor3_check(d1, d2, t, eta, cfg, deficit=deficit))
            out.append(bounds.rioul_check(d1, d2, t, cfg, deficit=deficit))
    else:
        out.append(bounds.thm5_ratio(d1, t, cfg))
        out.append(bounds.prop8_check(d1, t, cfg))
        out.append(bounds.twosided_growth_check(d1, d2, t, cfg))
    return [dict(mu=str(mu_spec), nu=str(nu_spec), **r.to_dict()) for r in out]


def run_bound_suite(pairs, t_list=DEFAULT_T_LIST, cfg=DEFAULT_CONFIG, kind="pairs"):
    """Evaluate every bound of ``kind`` on each pair and each ``t``.

    Hypothesis or parse failures are collected per job and the rest of the
    suite continues.  Returns a :class:`SuiteResult`.
    """
    if kind not in ("pairs", "growth"):
        raise DomainError("kind must be 'pairs' or 'growth'")
    t_list = [float(t) for t in t_list]
    if any(not 0.0 < t < 1.0 for t in t_list):
        raise DomainError("t values must lie in (0, 1)")
    jobs = []
    for mu, nu in pairs:
        jobs.extend((kind, mu, nu, t) for t in t_list)
        if kind == "pairs":
            jobs.append((kind, mu, nu, None))

    def run(job):
        try:
            return _pair_reports(job, cfg), None
        except EpiLabError as exc:
            return [], {"mu": job[1], "nu": job[2], "t": job[3], "error": type(exc).__name__, "message": str(exc)}

    reports, errors = [], []
    for rep, err in _map(run, jobs):
        reports.extend(rep)
        if err is not None:
            errors.append(err)
    return SuiteResult(reports=reports, errors=errors)


# -- lemma fuzz -------------------------------------------------------------

def run_lemma_fuzz(trials, dim_range=(2, 8), seed=0, force_equal=False):
    """JSON text summarizing the seeded log-det inequality campaign."""
    summary = lemma_fuzz(trials, dims=dim_range, seed=seed, force_equal=force_equal)
    return json.dumps(summary, indent=2, sort_keys=True) + "\n"

