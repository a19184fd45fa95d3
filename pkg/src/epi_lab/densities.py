"""Centered one-dimensional probability densities.

Five families are supported: ``Gaussian``, ``Mixture`` (centered Gaussian
mixtures), ``Laplace``, ``QuarticGibbs`` (density proportional to
``exp(-x**2/2 - a*x**4)``) and ``Grid`` (uniformly sampled pdf, linearly
interpolated).  ``Scaled`` represents the law of ``k*X`` for families that are
not closed under dilation.

All densities are immutable.  Point evaluations accept scalars or arrays and
return the same shape.
"""

from dataclasses import dataclass, field
from functools import cached_property
import math
from pathlib import Path

import numpy as np
from scipy import optimize, signal, special

from ._numerics import CumulativeTable, bisect, composite_integrate
from .errors import (
    ConfigurationError,
    DomainError,
    HypothesisError,
    NonSmoothPointError,
    UnsupportedOperationError,
)

__all__ = [
    "QuadratureConfig",
    "Density1D",
    "Gaussian",
    "Mixture",
    "Laplace",
    "QuarticGibbs",
    "Grid",
    "Scaled",
    "mixture_counterexample",
    "absolute_moment",
    "to_grid",
    "gaussian_smooth",
    "sum_density",
    "write_grid_csv",
    "read_grid_csv",
    "bakry_emery_constant",
    "check_bakry_emery",
    "check_log_concave",
    "curvature_region_mass",
]

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# points per narrowest standard deviation demanded of convolution grids
MIN_POINTS_PER_SCALE = 16


@dataclass(frozen=True)
class QuadratureConfig:
    """Numerical resolution shared by integrals, grids and FFT convolutions."""

    support_radius_multiplier: float = 12.0
    grid_points: int = 2**16
    cdf_bisection_tol: float = 1e-12
    integral_tol: float = 1e-9
    transport_nodes: int = 2**11

    def __post_init__(self):
        n = self.grid_points
        if n < 2**10 or n & (n - 1):
            raise ConfigurationError(f"grid_points must be a power of two >= 2**10, got {n}")
        m = self.transport_nodes
        if m < 2**6 or m & (m - 1):
            raise ConfigurationError(f"transport_nodes must be a power of two >= 2**6, got {m}")
        for name in ("support_radius_multiplier", "cdf_bisection_tol", "integral_tol"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive")


DEFAULT_CONFIG = QuadratureConfig()


def _points(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("evaluation point must be finite")
    return arr


def _not_nan(x):
    arr = np.asarray(x, dtype=float)
    if np.any(np.isnan(arr)):
        raise DomainError("evaluation point is NaN")
    return arr


def _shaped(x, arr):
    return float(arr) if np.ndim(x) == 0 else arr


class Density1D:
    """Interface shared by all density families.

    Subclasses implement the underscore methods on float arrays; the public
    methods validate input and preserve scalar/array shape.
    """

    symmetric = True

    # -- public evaluation -------------------------------------------------
    def pdf(self, x):
        return _shaped(x, self._pdf(_points(x)))

    def log_pdf(self, x):
        return _shaped(x, self._log_pdf(_points(x)))

    def cdf(self, x):
        return _shaped(x, self._cdf(_not_nan(x)))

    def sf(self, x):
        """Survival function ``1 - cdf(x)``, accurate in the upper tail."""
        return _shaped(x, self._sf(_not_nan(x)))

    def quantile(self, u):
        """Generalized inverse of the cdf for ``u`` in ``(0, 1)``."""
        arr = np.asarray(u, dtype=float)
        if not np.all((arr > 0.0) & (arr < 1.0)):
            raise DomainError("quantile level must lie in the open interval (0, 1)")
        lower = arr <= 0.5
        out = np.where(lower, self._lower_quantile(np.where(lower, arr, 0.5)),
                       self._upper_quantile(np.where(lower, 0.5, 1.0 - arr)))
        return _shaped(u, out)

    def upper_quantile(self, p):
        """Point ``x`` with ``sf(x) = p``; keeps precision for tiny ``p``."""
        arr = np.asarray(p, dtype=float)
        if not np.all((arr > 0.0) & (arr < 1.0)):
            raise DomainError("tail probability must lie in (0, 1)")
        return _shaped(p, self._upper_quantile(arr))

    def lower_quantile(self, p):
        """Point ``x`` with ``cdf(x) = p``; keeps precision for tiny ``p``."""
        arr = np.asarray(p, dtype=float)
        if not np.all((arr > 0.0) & (arr < 1.0)):
            raise DomainError("tail probability must lie in (0, 1)")
        return _shaped(p, self._lower_quantile(arr))

    def log_pdf_second_derivative(self, x):
        return _shaped(x, self._log_curvature(_points(x)))

    def absolute_moment(self, p):
        if not p > 0:
            raise DomainError("moment order must be positive")
        return float(self._absolute_moment(float(p)))

    @property
    def second_moment(self):
        return self.absolute_moment(2.0)

    @property
    def std(self):
        return math.sqrt(self.second_moment)

    # -- geometry used for grids --------------------------------------------
    def support_radius(self, cfg=DEFAULT_CONFIG):
        """Half-width of a centered interval holding all but negligible mass."""
        return cfg.support_radius_multiplier * self.spread

    @property
    def spread(self):
        """Scale of the widest feature (tail scale)."""
        return self.std

    @property
    def min_scale(self):
        """Scale of the narrowest feature a grid must resolve."""
        return self.std

    def scaled(self, k):
        """Law of ``k * X``."""
        if not k > 0:
            raise DomainError("scale factor must be positive")
        if k == 1.0:
            return self
        return Scaled(self, float(k))

    # -- defaults -----------------------------------------------------------
    def _log_pdf(self, x):
        with np.errstate(divide="ignore"):
            return np.log(self._pdf(x))

    def _sf(self, x):
        return self._cdf(-x)

    def _lower_quantile(self, p):
        lo = np.full_like(p, -self.spread, dtype=float)
        for _ in range(64):
            short = self._cdf(lo) > p
            if not short.any():
                break
            lo = np.where(short, 2.0 * lo, lo)
        return bisect(lambda x: self._cdf(x) - p, lo, np.zeros_like(lo), DEFAULT_CONFIG.cdf_bisection_tol)

    def _upper_quantile(self, p):
        return -self._lower_quantile(p)

    def _log_curvature(self, x):
        raise UnsupportedOperationError(f"{type(self).__name__} has no analytic log-density curvature")


@dataclass(frozen=True)
class Gaussian(Density1D):
    """Centered normal law with the given variance."""

    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.variance) and self.variance > 0):
            raise DomainError("Gaussian variance must be positive and finite")

    @property
    def _sigma(self):
        return math.sqrt(self.variance)

    def _pdf(self, x):
        return np.exp(self._log_pdf(x))

    def _log_pdf(self, x):
        return -0.5 * x * x / self.variance - LOG_SQRT_2PI - 0.5 * math.log(self.variance)

    def _cdf(self, x):
        return special.ndtr(x / self._sigma)

    def _lower_quantile(self, p):
        return self._sigma * special.ndtri(p)

    def _log_curvature(self, x):
        return np.full_like(x, -1.0 / self.variance)

    def _absolute_moment(self, p):
        return gaussian_absolute_moment(self.variance, p)

    @property
    def spread(self):
        return self._sigma

    @property
    def min_scale(self):
        return self._sigma

    def scaled(self, k):
        if not k > 0:
            raise DomainError("scale factor must be positive")
        return Gaussian(k * k * self.variance)


def gaussian_absolute_moment(variance, p):
    """E|X|^p for a centered normal law of the given variance."""
    return variance ** (p / 2) * 2 ** (p / 2) * math.gamma((p + 1) / 2) / math.sqrt(math.pi)


@dataclass(frozen=True)
class Mixture(Density1D):
    """Centered Gaussian mixture given as ``((weight, variance), ...)``."""

    components: tuple

    def __post_init__(self):
        comps = tuple((float(w), float(v)) for w, v in self.components)
        if not comps:
            raise DomainError("mixture needs at least one component")
        for w, v in comps:
            if not (0.0 < w <= 1.0) or not (math.isfinite(v) and v > 0):
                raise DomainError(f"invalid mixture component (weight={w}, variance={v})")
        if abs(sum(w for w, _ in comps) - 1.0) > 1e-12:
            raise DomainError("mixture weights must sum to 1")
        object.__setattr__(self, "components", comps)

    @cached_property
    def _w(self):
        return np.array([w for w, _ in self.components])

    @cached_property
    def _v(self):
        return np.array([v for _, v in self.components])

    def _component_logs(self, x):
        x = x[..., None]
        return np.log(self._w) - 0.5 * x * x / self._v - LOG_SQRT_2PI - 0.5 * np.log(self._v)

    def _log_pdf(self, x):
        return special.logsumexp(self._component_logs(x), axis=-1)

    def _pdf(self, x):
        return np.exp(self._log_pdf(x))

    def _cdf(self, x):
        return (self._w * special.ndtr(x[..., None] / np.sqrt(self._v))).sum(axis=-1)

    def _log_curvature(self, x):
        logs = self._component_logs(x)
        r = np.exp(logs - special.logsumexp(logs, axis=-1, keepdims=True))
        prec = 1.0 / self._v
        xx = x[..., None]
        first = (r * (-xx * prec)).sum(axis=-1)
        second = (r * (xx * xx * prec * prec - prec)).sum(axis=-1)
        return second - first * first

    def _absolute_moment(self, p):
        return sum(w * gaussian_absolute_moment(v, p) for w, v in self.components)

    @property
    def spread(self):
        return math.sqrt(max(self._v))

    @property
    def min_scale(self):
        return math.sqrt(min(self._v))

    def scaled(self, k):
        if not k > 0:
            raise DomainError("scale factor must be positive")
        return Mixture(tuple((w, k * k * v) for w, v in self.components))

    @property
    def counterexample_eps(self):
        """The ``eps`` with ``self == mixture_counterexample(eps)``, else None."""
        if len(self.components) != 2:
            return None
        eps = self.components[0][0]
        if 0 < eps < 1 and self == mixture_counterexample(eps):
            return eps
        return None


def mixture_counterexample(eps):
    """Unit-variance mixture of centered normals with variances 1/(2 eps) and 1/(2(1-eps))."""
    if not (0.0 < eps < 1.0):
        raise DomainError("eps must lie in (0, 1)")
    return Mixture(((eps, 1.0 / (2.0 * eps)), (1.0 - eps, 1.0 / (2.0 * (1.0 - eps)))))


@dataclass(frozen=True)
class Laplace(Density1D):
    """Two-sided exponential law ``exp(-|x|/scale) / (2 scale)``."""

    scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise DomainError("Laplace scale must be positive and finite")

    def _log_pdf(self, x):
        return -np.abs(x) / self.scale - math.log(2.0 * self.scale)

    def _pdf(self, x):
        return np.exp(self._log_pdf(x))

    def _cdf(self, x):
        z = x / self.scale
        with np.errstate(over="ignore"):
            return np.where(z < 0, 0.5 * np.exp(np.minimum(z, 0.0)), 1.0 - 0.5 * np.exp(-np.maximum(z, 0.0)))

    def _sf(self, x):
        return self._cdf(-x)

    def _lower_quantile(self, p):
        return self.scale * np.log(2.0 * p)

    def _log_curvature(self, x):
        if np.any(x == 0.0):
            raise NonSmoothPointError("Laplace log-density is not differentiable at 0")
        return np.zeros_like(x)

    def _absolute_moment(self, p):
        return self.scale**p * math.gamma(p + 1.0)

    @property
    def spread(self):
        # exponential tails: 3 scales per multiplier unit keeps e^{-R} below 1e-15
        return 3.0 * self.scale

    @property
    def min_scale(self):
        return self.scale

    def scaled(self, k):
        if not k > 0:
            raise DomainError("scale factor must be positive")
        return Laplace(k * self.scale)


def _quartic_potential(a):
    return lambda x: 0.5 * x * x + a * x**4


def _quartic_table_radius(a):
    # potential reaches 760 (pdf underflows double precision)
    if a == 0:
        return math.sqrt(1520.0)
    y = (-0.5 + math.sqrt(0.25 + 4 * a * 760.0)) / (2 * a)
    return math.sqrt(y)


_GEOMETRIC = tuple(2.0**-k for k in range(1, 40))


def quartic_log_normalizer(a):
    """log of the integral of exp(-x^2/2 - a x^4) over the line."""
    potential = _quartic_potential(a)
    radius = _quartic_table_radius(a)
    half = composite_integrate(lambda x: np.exp(-potential(x)), 0.0, radius, 1.0 / 16)
    return math.log(2.0 * half)


@dataclass(frozen=True)
class QuarticGibbs(Density1D):
    """Density proportional to ``exp(-x**2/2 - a*x**4)``; uniformly log-concave with modulus 1."""

    a: float
    log_normalizer: float = None

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a >= 0):
            raise DomainError("quartic coefficient a must be finite and >= 0")
        object.__setattr__(self, "a", float(self.a))
        if self.log_normalizer is None:
            object.__setattr__(self, "log_normalizer", quartic_log_normalizer(self.a))

    def _log_pdf(self, x):
        return -(0.5 * x * x + self.a * x**4) - self.log_normalizer

    def _pdf(self, x):
        return np.exp(self._log_pdf(x))

    @cached_property
    def _table(self):
        radius = _quartic_table_radius(self.a)
        return CumulativeTable(self._pdf, 0.0, radius, int(math.ceil(radius * 16)))

    def _cdf(self, x):
        tail = self._table.upper(np.abs(x))
        return np.where(x <= 0, tail, 1.0 - tail)

    def _sf(self, x):
        return self._cdf(-x)

    def _log_curvature(self, x):
        return -(1.0 + 12.0 * self.a * x * x)

    def _absolute_moment(self, p):
        radius = _quartic_table_radius(self.a)
        # geometric panels toward 0 resolve the x**p endpoint singularity
        return 2.0 * composite_integrate(lambda x: x**p * self._pdf(x), 0.0, radius, 1.0 / 16, breakpoints=_GEOMETRIC)

    @cached_property
    def std(self):
        return math.sqrt(self._absolute_moment(2.0))


@dataclass(frozen=True)
class Scaled(Density1D):
    """Law of ``factor * X`` where ``X`` has law ``base``."""

    base: Density1D
    factor: float

    def __post_init__(self):
        if isinstance(self.base, Scaled):
            object.__setattr__(self, "factor", self.factor * self.base.factor)
            object.__setattr__(self, "base", self.base.base)
        if not self.factor > 0:
            raise DomainError("scale factor must be positive")

    @property
    def symmetric(self):
        return self.base.symmetric

    def _pdf(self, x):
        return self.base._pdf(x / self.factor) / self.factor

    def _log_pdf(self, x):
        return self.base._log_pdf(x / self.factor) - math.log(self.factor)

    def _cdf(self, x):
        return self.base._cdf(x / self.factor)

    def _sf(self, x):
        return self.base._sf(x / self.factor)

    def _lower_quantile(self, p):
        return self.factor * self.base._lower_quantile(p)

    def _upper_quantile(self, p):
        return self.factor * self.base._upper_quantile(p)

    def _log_curvature(self, x):
        return self.base._log_curvature(x / self.factor) / self.factor**2

    def _absolute_moment(self, p):
        return self.factor**p * self.base._absolute_moment(p)

    @property
    def spread(self):
        return self.factor * self.base.spread

    @property
    def min_scale(self):
        return self.factor * self.base.min_scale

    @property
    def std(self):
        return self.factor * self.base.std

    def scaled(self, k):
        return Scaled(self.base, self.factor * k)


@dataclass(frozen=True, eq=False)
class Grid(Density1D):
    """Density sampled at ``n`` uniform nodes of ``[lo, hi]``, linear in between, 0 outside.

    Values are renormalized at construction so the interpolant has unit mass.
    """

    lo: float
    hi: float
    values: np.ndarray = field(repr=False)

    symmetric = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 2:
            raise DomainError("grid needs a 1-D array of at least two samples")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.hi > self.lo):
            raise DomainError("grid support must be a finite interval with lo < hi")
        if not np.all(np.isfinite(vals)) or np.any(vals < 0):
            raise DomainError("grid samples must be finite and nonnegative")
        h = (self.hi - self.lo) / (vals.size - 1)
        mass = h * (vals.sum() - 0.5 * (vals[0] + vals[-1]))
        if not (mass > 0 and math.isfinite(mass)):
            raise DomainError("grid density is not normalizable")
        vals /= mass
        vals.setflags(write=False)
        object.__setattr__(self, "lo", float(self.lo))
        object.__setattr__(self, "hi", float(self.hi))
        object.__setattr__(self, "values", vals)

    @property
    def n(self):
        return self.values.size

    @property
    def spacing(self):
        return (self.hi - self.lo) / (self.n - 1)

    @cached_property
    def nodes(self):
        return np.linspace(self.lo, self.hi, self.n)

    @cached_property
    def _cells(self):
        v = self.values
        return 0.5 * self.spacing * (v[1:] + v[:-1])

    @cached_property
    def _left(self):
        return np.concatenate([[0.0], np.cumsum(self._cells)])

    @cached_property
    def _right(self):
        return np.concatenate([np.cumsum(self._cells[::-1])[::-1], [0.0]])

    def _pdf(self, x):
        return np.interp(x, self.nodes, self.values, left=0.0, right=0.0)

    def _locate(self, x):
        xc = np.clip(x, self.lo, self.hi)
        k = np.clip(np.floor((xc - self.lo) / self.spacing).astype(np.int64), 0, self.n - 2)
        return xc, k

    def _cdf(self, x):
        xc, k = self._locate(x)
        h = self.spacing
        f0, f1 = self.values[k], self.values[k + 1]
        s = xc - (self.lo + k * h)
        partial = f0 * s + (f1 - f0) * s * s / (2.0 * h)
        return np.where(x >= self.hi, 1.0, np.minimum(self._left[k] + partial, 1.0))

    def _sf(self, x):
        xc, k = self._locate(x)
        h = self.spacing
        f0, f1 = self.values[k], self.values[k + 1]
        s = (self.lo + (k + 1) * h) - xc
        partial = f1 * s - (f1 - f0) * s * s / (2.0 * h)
        return np.where(x <= self.lo, 1.0, np.minimum(self._right[k + 1] + partial, 1.0))

    def _lower_quantile(self, p):
        lo = np.full_like(p, self.lo)
        hi = np.full_like(p, self.hi)
        return bisect(lambda x: self._cdf(x) - p, lo, hi, DEFAULT_CONFIG.cdf_bisection_tol)

    def _upper_quantile(self, p):
        lo = np.full_like(p, self.lo)
        hi = np.full_like(p, self.hi)
        # strictly-less comparison in bisect yields the right end of flat regions here;
        # sf is decreasing so solve p - sf(x) = 0
        return bisect(lambda x: p - self._sf(x), lo, hi, DEFAULT_CONFIG.cdf_bisection_tol)

    def _absolute_moment(self, p):
        x, v = self.nodes, self.values
        g = np.abs(x) ** p * v
        return float(self.spacing * (g.sum() - 0.5 * (g[0] + g[-1])))

    @cached_property
    def std(self):
        return math.sqrt(self._absolute_moment(2.0))

    def mean(self):
        g = self.nodes * self.values
        return float(self.spacing * (g.sum() - 0.5 * (g[0] + g[-1])))

    def support_radius(self, cfg=DEFAULT_CONFIG):
        return max(abs(self.lo), abs(self.hi))

    @property
    def spread(self):
        return self.std

    @property
    def min_scale(self):
        return MIN_POINTS_PER_SCALE * self.spacing

    def scaled(self, k):
        if not k > 0:
            raise DomainError("scale factor must be positive")
        return Grid(k * self.lo, k * self.hi, self.values / k)


def absolute_moment(d, p):
    """E|X|^p under ``d``."""
    return d.absolute_moment(p)


def _sample(d, nodes):
    vals = np.asarray(d._pdf(nodes), dtype=float)
    mass = (nodes[1] - nodes[0]) * vals.sum()
    return vals / mass


def sum_density(parts, cfg=DEFAULT_CONFIG):
    """Density of ``X_1 + ... + X_k`` for independent ``X_i ~ parts[i]`` as a Grid.

    Every part is sampled on one centered grid of ``cfg.grid_points + 1``
    nodes wide enough to hold the sum, then the samples are convolved by FFT.

    Raises
    ------
    ConfigurationError
        If the grid spacing cannot resolve the narrowest part.
    """
    parts = list(parts)
    if not parts:
        raise DomainError("need at least one density")
    radius = math.sqrt(sum(p.support_radius(cfg) ** 2 for p in parts))
    n = cfg.grid_points
    h = 2.0 * radius / n
    finest = min(p.min_scale for p in parts)
    if h > finest / MIN_POINTS_PER_SCALE:
        need = 2 ** int(math.ceil(math.log2(2.0 * radius * MIN_POINTS_PER_SCALE / finest)))
        raise ConfigurationError(
            f"grid of {n} points over [-{radius:.4g}, {radius:.4g}] has spacing {h:.3g}, "
            f"too coarse for feature scale {finest:.3g}; required support radius "
            f"{radius:.4g} needs grid_points >= {need}"
        )
    nodes = np.linspace(-radius, radius, n + 1)
    out = _sample(parts[0], nodes)
    for part in parts[1:]:
        out = signal.fftconvolve(out, _sample(part, nodes), mode="same") * h
        np.clip(out, 0.0, None, out=out)
    return Grid(-radius, radius, out)


def to_grid(d, cfg=DEFAULT_CONFIG):
    """Sample ``d`` on a centered uniform grid of ``cfg.grid_points + 1`` nodes."""
    if isinstance(d, Grid):
        return d
    radius = d.support_radius(cfg)
    nodes = np.linspace(-radius, radius, cfg.grid_points + 1)
    return Grid(-radius, radius, d._pdf(nodes))


def gaussian_smooth(d, s, cfg=DEFAULT_CONFIG):
    """Density of ``X + sqrt(s) Z`` with ``Z`` standard normal.

    Gaussian inputs stay Gaussian; everything else becomes a Grid.
    """
    if not s > 0:
        raise DomainError("smoothing variance must be positive")
    if isinstance(d, Gaussian):
        return Gaussian(d.variance + s)
    return sum_density([d, Gaussian(s)], cfg)


GRID_HEADER = "# epi-lab grid v1, lo={lo}, hi={hi}, n={n}"


def _fmt(x):
    return repr(float(x))


def write_grid_csv(grid, path):
    """Write a Grid as the two-column ``x,pdf`` CSV with its one-line header."""
    lines = [GRID_HEADER.format(lo=_fmt(grid.lo), hi=_fmt(grid.hi), n=grid.n)]
    lines.extend(f"{_fmt(x)},{_fmt(v)}" for x, v in zip(grid.nodes, grid.values))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_grid_csv(path):
    """Read a Grid written by :func:`write_grid_csv`."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text or not text[0].startswith("# epi-lab grid v1"):
        raise DomainError(f"{path}: missing '# epi-lab grid v1' header")
    meta = {}
    for item in text[0][len("# epi-lab grid v1"):].split(","):
        if "=" in item:
            key, value = item.split("=", 1)
            meta[key.strip()] = value.strip()
    try:
        lo, hi, n = float(meta["lo"]), float(meta["hi"]), int(meta["n"])
    except (KeyError, ValueError) as exc:
        raise DomainError(f"{path}: malformed grid header") from exc
    rows = [line.split(",") for line in text[1:] if line.strip()]
    if len(rows) != n:
        raise DomainError(f"{path}: header says n={n} but found {len(rows)} rows")
    values = np.array([float(r[1]) for r in rows])
    return Grid(lo, hi, values)


def curvature_grid(d, cfg=DEFAULT_CONFIG, points=10_000):
    """Evaluation nodes for log-concavity checks (an even count, so 0 is excluded)."""
    radius = d.support_radius(cfg)
    return np.linspace(-radius, radius, points)


def bakry_emery_constant(d, cfg=DEFAULT_CONFIG, points=10_000):
    """Largest ``eta`` with ``-(log f)'' >= eta`` on the check grid.

    Raises UnsupportedOperationError for families without analytic curvature.
    """
    found = float(np.min(-d.log_pdf_second_derivative(curvature_grid(d, cfg, points))))
    # symmetric families often attain the minimum at 0, which the even grid skips
    try:
        found = min(found, float(-d.log_pdf_second_derivative(np.array([0.0]))[0]))
    except NonSmoothPointError:
        pass
    return found


def check_bakry_emery(d, eta, cfg=DEFAULT_CONFIG, points=10_000):
    """Raise HypothesisError unless ``-(log f)'' >= eta`` on the check grid."""
    if not eta > 0:
        raise DomainError("Bakry-Emery parameter must be positive")
    found = bakry_emery_constant(d, cfg, points)
    if found < eta * (1.0 - 1e-12) - 1e-12:
        raise HypothesisError(
            f"{d!r} violates -(log f)'' >= {eta}: minimum curvature on grid is {found:.6g}"
        )
    return found


def check_log_concave(d, cfg=DEFAULT_CONFIG, points=10_000):
    """Raise HypothesisError unless ``-(log f)'' >= 0`` on the check grid."""
    found = bakry_emery_constant(d, cfg, points)
    if found < -1e-12:
        raise HypothesisError(f"{d!r} is not log-concave: curvature minimum {found:.6g}")
    return found


def curvature_region_mass(d, threshold=1.0, cfg=DEFAULT_CONFIG, points=20_001):
    """Mass under ``d`` of ``{x : -(log f)''(x) >= threshold}`` for a symmetric density.

    The boundary points are located by root-finding on the positive
    half-line and the mass is assembled from survival-function differences.
    """
    if not d.symmetric:
        raise UnsupportedOperationError("region mass is implemented for symmetric densities")
    radius = d.support_radius(cfg)

    # curvature equal to the threshold up to rounding counts as inside
    slack = 1e-12 * max(1.0, abs(threshold))

    def g(x):
        return -d._log_curvature(np.asarray(x, dtype=float)) - threshold + slack

    xs = np.linspace(0.0, radius, points)
    gs = g(xs)
    cuts = [0.0]
    for i in np.nonzero(np.sign(gs[:-1]) != np.sign(gs[1:]))[0]:
        if gs[i] == 0.0:
            cuts.append(float(xs[i]))
        elif gs[i + 1] != 0.0:
            cuts.append(optimize.brentq(lambda y: float(g(y)), xs[i], xs[i + 1], xtol=1e-14))
    cuts.append(math.inf)
    half = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        mid = 0.5 * (a + (radius if math.isinf(b) else b))
        if g(mid) >= 0.0:
            half += float(d._sf(np.asarray(a))) - (0.0 if math.isinf(b) else float(d._sf(np.asarray(b))))
    return 2.0 * half
