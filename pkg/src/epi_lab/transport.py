"""One-dimensional optimal transport between centered densities.

In one dimension the Brenier map from ``src`` to ``dst`` is the monotone
rearrangement ``F_dst^{-1} o F_src``.  Integrals against the quantile
coupling are computed in Gaussian coordinates: ``u = Phi(z)``, so that
``int_0^1 g(q1(u), q2(u)) du = E g(T1(Z), T2(Z))`` where ``T_i`` pushes the
standard normal onto ``d_i``.  Composite Gauss-Legendre panels on
``[-12, 12]`` then handle the endpoint singularities of quantile functions.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import optimize

from ._numerics import CumulativeTable, bisect, composite_integrate, golden_section, panel_rule
from .densities import _GEOMETRIC, DEFAULT_CONFIG, Density1D, Gaussian
from .errors import DegenerateError, DomainError, SingularMapError
from .psd import as_symmetric, sqrtm_psd

__all__ = [
    "TransportMap1D",
    "brenier_map_1d",
    "gaussian_map",
    "w2_1d",
    "w1_1d",
    "GaussianW2",
    "w2_gaussian_nd",
    "gaussian_inner_product",
    "gaussian_fit_w2",
    "dF2",
    "delta_inf",
    "delta_inf_closed_form",
    "cheeger_constant",
    "growth_profile",
    "growth_constant",
    "RadialProfile",
    "radial_profile_map",
]

STANDARD_GAUSSIAN = Gaussian(1.0)
Z_MAX = 12.0
# smallest tail probability fed to a quantile function
P_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class TransportMap1D:
    """Monotone map ``T = F_target^{-1} o F_source`` with ``T' = f_source / f_target(T)``."""

    source: Density1D
    target: Density1D

    def evaluate(self, x):
        arr = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError("map evaluation point must be finite")
        flat = arr.ravel()
        F = self.source._cdf(flat)
        S = self.source._sf(flat)
        lower = F <= S
        out = np.empty_like(flat)
        if lower.any():
            out[lower] = self.target._lower_quantile(np.maximum(F[lower], P_FLOOR))
        if (~lower).any():
            out[~lower] = self.target._upper_quantile(np.maximum(S[~lower], P_FLOOR))
        out = out.reshape(arr.shape)
        return float(out) if np.ndim(x) == 0 else out

    def derivative(self, x):
        arr = np.asarray(x, dtype=float)
        T = np.asarray(self.evaluate(arr))
        num = self.source._pdf(arr)
        den = self.target._pdf(T)
        if np.any(den <= 0):
            bad = arr[den <= 0] if arr.ndim else arr
            raise SingularMapError(f"target density vanishes at the image of {np.atleast_1d(bad)[:3]}")
        out = num / den
        return float(out) if np.ndim(x) == 0 else out

    def sample(self, x):
        """Arrays ``(x, T(x), T'(x))``."""
        x = np.asarray(x, dtype=float)
        return x, np.asarray(self.evaluate(x)), np.asarray(self.derivative(x))

    def write_csv(self, path, x):
        """Write ``x,T,dT`` rows for plotting."""
        xs, ts, ds = self.sample(x)
        lines = ["x,T,dT"] + [f"{a!r},{b!r},{c!r}" for a, b, c in zip(xs.tolist(), ts.tolist(), ds.tolist())]
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def brenier_map_1d(src, dst):
    """Monotone (Brenier) map pushing ``src`` onto ``dst``."""
    return TransportMap1D(src, dst)


def gaussian_map(d):
    """Brenier map from the standard normal onto ``d``."""
    return TransportMap1D(STANDARD_GAUSSIAN, d)


@lru_cache(maxsize=16)
def _z_rule(nodes):
    per_side = max(1, nodes // 32)
    edges = np.concatenate([np.linspace(-Z_MAX, 0.0, per_side + 1), np.linspace(0.0, Z_MAX, per_side + 1)[1:]])
    z, w = panel_rule(edges)
    w = w * np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    z.setflags(write=False)
    w.setflags(write=False)
    return z, w


@lru_cache(maxsize=512)
def _pushed(d, nodes):
    z, w = _z_rule(nodes)
    T = np.asarray(gaussian_map(d).evaluate(z))
    T.setflags(write=False)
    return z, w, T


def w2_1d(d1, d2, cfg=DEFAULT_CONFIG):
    """Squared quadratic Wasserstein distance ``int_0^1 (q1 - q2)^2 du``."""
    z, w, T1 = _pushed(d1, cfg.transport_nodes)
    _, _, T2 = _pushed(d2, cfg.transport_nodes)
    return float(np.dot(w, (T1 - T2) ** 2))


def w1_1d(d1, d2, cfg=DEFAULT_CONFIG):
    """W1 distance ``int |F1 - F2| dx``.

    The cdf difference is evaluated through survival functions on the right
    half-line, and the integral is split at every sign change so each panel
    integrates a smooth function.
    """
    radius = max(d1.support_radius(cfg), d2.support_radius(cfg))

    def diff(x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0, d1._cdf(x) - d2._cdf(x), d2._sf(x) - d1._sf(x))

    xs = np.linspace(-radius, radius, 2**13 + 1)
    ds = diff(xs)
    roots = []
    for i in np.nonzero(np.sign(ds[:-1]) * np.sign(ds[1:]) < 0)[0]:
        roots.append(optimize.brentq(lambda y: float(diff(y)), xs[i], xs[i + 1], xtol=1e-14))
    width = min(d1.min_scale, d2.min_scale) / 8.0
    return composite_integrate(lambda x: np.abs(diff(x)), -radius, radius, width, breakpoints=[0.0, *roots])


@dataclass(frozen=True)
class GaussianW2:
    """Squared W2 between centered Gaussians, with the Frobenius square-root form alongside."""

    bures: float
    frobenius: float
    commuting: bool

    def __float__(self):
        return self.bures

    @property
    def differ(self):
        return not math.isclose(self.bures, self.frobenius, rel_tol=1e-9, abs_tol=1e-10)


def w2_gaussian_nd(S1, S2):
    """Bures value ``tr(S1 + S2 - 2 (S1^{1/2} S2 S1^{1/2})^{1/2})`` and ``||S1^{1/2} - S2^{1/2}||_F^2``."""
    A = as_symmetric(S1)
    B = as_symmetric(S2)
    if A.shape != B.shape:
        raise DomainError("covariances must have the same shape")
    ra = sqrtm_psd(A)
    rb = sqrtm_psd(B)
    middle = sqrtm_psd(0.5 * (ra @ B @ ra + (ra @ B @ ra).T))
    bures = max(float(np.trace(A) + np.trace(B) - 2.0 * np.trace(middle)), 0.0)
    frob = float(np.sum((ra - rb) ** 2))
    scale = max(1.0, float(np.max(np.abs(A))), float(np.max(np.abs(B))))
    commuting = bool(np.max(np.abs(A @ B - B @ A)) <= 1e-10 * scale**2)
    return GaussianW2(bures=bures, frobenius=frob, commuting=commuting)


def gaussian_inner_product(d, cfg=DEFAULT_CONFIG):
    """``int_0^1 q_d(u) Phi^{-1}(u) du = E[T(Z) Z]``."""
    z, w, T = _pushed(d, cfg.transport_nodes)
    return float(np.dot(w, T * z))


def gaussian_fit_w2(d, cfg=DEFAULT_CONFIG):
    """Closest centered Gaussian in W2: returns ``(s_star, dW2_sq)``.

    ``W2^2(d, N(0, s)) = m2 + s - 2 sqrt(s) c`` with ``c = E[T(Z) Z]``.
    """
    c = gaussian_inner_product(d, cfg)
    m2 = d.second_moment
    s_star = max(c, 0.0) ** 2
    value = m2 + s_star - 2.0 * math.sqrt(s_star) * c
    return s_star, max(value, 0.0)


def dF2(S_mu, S_nu, tol=1e-12):
    """Minimize ``||sqrt(theta) S_mu^{1/2} - sqrt(1-theta) S_nu^{1/2}||_F^2`` over theta.

    Returns ``(theta_star, value)``.  The objective is convex in theta.
    """
    A = sqrtm_psd(S_mu)
    B = sqrtm_psd(S_nu)
    if A.shape != B.shape:
        raise DomainError("covariances must have the same shape")
    alpha = float(np.sum(A * A))
    beta = float(np.sum(B * B))
    if alpha == 0 and beta == 0:
        raise DomainError("covariances must not both vanish")
    gamma = float(np.sum(A * B))

    def g(theta):
        return theta * alpha + (1.0 - theta) * beta - 2.0 * math.sqrt(theta * (1.0 - theta)) * gamma

    theta, value = golden_section(g, 0.0, 1.0, tol=tol)
    return theta, max(value, 0.0)


def _delta_objective(m1, m2, c1, c2):
    def J(a, b):
        return m1 + a * a - 2.0 * a * c1 + m2 + b * b - 2.0 * b * c2 + (a - b) ** 2

    return J


def delta_inf(d1, d2, cfg=DEFAULT_CONFIG, tol=1e-9):
    """``inf over centered Gaussians g1, g2 of W2^2(d1,g1) + W2^2(d2,g2) + W2^2(g1,g2)``.

    Each Gaussian is parameterized by its standard deviation; the inner
    problem is solved by nested golden-section search on the box
    ``[0, 4 std1 + 4 std2]^2``.  Returns ``(s1_star, s2_star, value)``.
    """
    c1 = gaussian_inner_product(d1, cfg)
    c2 = gaussian_inner_product(d2, cfg)
    J = _delta_objective(d1.second_moment, d2.second_moment, c1, c2)
    top = 4.0 * d1.std + 4.0 * d2.std

    def inner(b):
        return golden_section(lambda a: J(a, b), 0.0, top, tol=tol)

    b_star, _ = golden_section(lambda b: inner(b)[1], 0.0, top, tol=tol)
    a_star, value = inner(b_star)
    return a_star**2, b_star**2, max(value, 0.0)


def delta_inf_closed_form(m1, m2, c1, c2):
    """Stationary point of the three-term objective (valid when ``c1, c2 >= 0``)."""
    a = (2.0 * c1 + c2) / 3.0
    b = (c1 + 2.0 * c2) / 3.0
    return a * a, b * b, _delta_objective(m1, m2, c1, c2)(a, b)


def cheeger_constant(d, cfg=DEFAULT_CONFIG, points=2**14 + 1):
    """``inf_x f(x) / min(F(x), 1 - F(x))`` for a density with median 0.

    Half-lines are the extremal sets of one-dimensional isoperimetry for such
    densities.  The infimum is located on a grid and refined on the two
    cells adjacent to the grid minimizer.
    """
    if abs(d.cdf(0.0) - 0.5) > 1e-8:
        raise DomainError("Cheeger computation requires median 0")
    radius = d.support_radius(cfg)
    xs = np.linspace(-radius, radius, points | 1)
    f = d._pdf(xs)
    m = np.minimum(d._cdf(xs), d._sf(xs))
    valid = m > 1e-280
    if np.any(f[valid] <= 0):
        raise DegenerateError("density vanishes inside its support")

    def ratio(x):
        x = np.asarray(x, dtype=float)
        return d._pdf(x) / np.minimum(d._cdf(x), d._sf(x))

    r = np.where(valid, f / np.where(valid, m, 1.0), np.inf)
    k = int(np.argmin(r))
    best = float(r[k])
    for a, b in ((k - 1, k), (k, k + 1)):
        if 0 <= a and b < xs.size and valid[a] and valid[b]:
            res = optimize.minimize_scalar(lambda x: float(ratio(x)), bounds=(xs[a], xs[b]),
                                           method="bounded", options={"xatol": 1e-12})
            best = min(best, float(res.fun))
    return best


def growth_profile(d, z_max=8.0, points=4001):
    """``z`` and ``T'(z) / sqrt(1 + z^2)`` for the Gaussian-to-``d`` Brenier map."""
    z = np.linspace(-z_max, z_max, points)
    return z, np.asarray(gaussian_map(d).derivative(z)) / np.sqrt(1.0 + z * z)


def growth_constant(d, z_max=8.0, points=4001):
    """``sup_z T'(z) / sqrt(1 + z^2)`` over the growth grid."""
    return float(np.max(growth_profile(d, z_max, points)[1]))


@dataclass(frozen=True, eq=False)
class RadialProfile(Density1D):
    """Positive density on ``(0, inf)`` defined by an unnormalized log-density.

    Parameters
    ----------
    log_density : callable
        Vectorized ``r -> log g(r)`` for ``r > 0``.
    upper : float, optional
        Radius beyond which ``g`` is negligible; found by doubling if omitted.
    """

    log_density: Callable = field(repr=False)
    upper: float = None
    label: str = ""

    symmetric = False

    def __post_init__(self):
        if self.upper is None:
            probe = np.linspace(1e-6, 1.0, 257)
            with np.errstate(divide="ignore", invalid="ignore"):
                peak = float(np.nanmax(self.log_density(probe)))
            r = 1.0
            while True:
                with np.errstate(divide="ignore", invalid="ignore"):
                    lr = float(self.log_density(np.array([r]))[0])
                    peak = max(peak, float(np.nanmax(self.log_density(np.linspace(r / 2, r, 65)))))
                if lr < peak - 800.0:
                    break
                r *= 2.0
                if r > 1e6:
                    raise DomainError("radial profile does not decay: not normalizable")
            object.__setattr__(self, "upper", r)
        upper = float(self.upper)
        with np.errstate(divide="ignore", invalid="ignore"):
            shift = float(np.nanmax(self.log_density(np.linspace(upper * 1e-6, upper, 4097))))
        if not math.isfinite(shift):
            raise DomainError("radial profile log-density is not finite anywhere")
        object.__setattr__(self, "_shift", shift)
        table = CumulativeTable(self._unnormalized, 0.0, upper, int(math.ceil(upper * 32)))
        if not (table.total > 0 and math.isfinite(table.total)):
            raise DomainError("radial profile is not normalizable")
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_log_norm", math.log(table.total) + shift)

    def _unnormalized(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(self.log_density(np.where(r > 0, r, 1.0)) - self._shift)
        return np.where(r > 0, np.nan_to_num(out, nan=0.0, posinf=0.0), 0.0)

    def _pdf(self, r):
        return self._unnormalized(r) / self._table.total

    def _cdf(self, r):
        return np.where(r <= 0, 0.0, self._table.lower(r) / self._table.total)

    def _sf(self, r):
        return np.where(r <= 0, 1.0, self._table.upper(r) / self._table.total)

    def _lower_quantile(self, p):
        return bisect(lambda r: self._cdf(r) - p, np.zeros_like(p), np.full_like(p, self.upper),
                      DEFAULT_CONFIG.cdf_bisection_tol)

    def _upper_quantile(self, p):
        return bisect(lambda r: p - self._sf(r), np.zeros_like(p), np.full_like(p, self.upper),
                      DEFAULT_CONFIG.cdf_bisection_tol)

    def _absolute_moment(self, p):
        return composite_integrate(lambda r: r**p * self._pdf(r), 0.0, self.upper, 1.0 / 32, breakpoints=_GEOMETRIC)

    @property
    def spread(self):
        return self.upper / DEFAULT_CONFIG.support_radius_multiplier

    @classmethod
    def gaussian(cls, n, variance=1.0):
        """Law of ``|X|`` for ``X ~ N(0, variance I_n)``: density proportional to ``r^{n-1} e^{-r^2/(2 variance)}``."""
        return cls(lambda r: (n - 1) * np.log(r) - 0.5 * r * r / variance, label=f"gaussian-radial(n={n}, var={variance})")

    @classmethod
    def exponential(cls, n, scale=1.0):
        """Density proportional to ``r^{n-1} e^{-r/scale}``."""
        return cls(lambda r: (n - 1) * np.log(r) - r / scale, label=f"exponential-radial(n={n}, scale={scale})")


def radial_profile_map(n, dst, cfg=DEFAULT_CONFIG, points=4001, tail=1e-10):
    """Radial part of the Gaussian-to-radial Brenier map and its growth constant.

    The full map is ``x -> T(|x|) x / |x|`` where ``T`` pushes the law of
    ``|Z|`` (``Z`` standard normal in ``R^n``) onto ``dst``.  Returns
    ``(T, sup_r T'(r) / sqrt(1 + r^2))`` with the sup over radii between the
    ``tail`` and ``1 - tail`` source quantiles.
    """
    if int(n) != n or n < 2:
        raise DomainError("dimension must be an integer >= 2")
    src = RadialProfile.gaussian(int(n))
    tmap = TransportMap1D(src, dst)
    r = np.linspace(src.lower_quantile(tail), src.upper_quantile(tail), points)
    ratio = np.asarray(tmap.derivative(r)) / np.sqrt(1.0 + r * r)
    return tmap, float(np.max(ratio))
