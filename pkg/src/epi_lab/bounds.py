"""Both sides of the EPI stability inequalities evaluated on concrete densities.

Every check returns a :class:`BoundReport` whose ``lhs`` is the quantity
being bounded (a deficit or an entropy power) and whose ``rhs`` is the
lower bound.  ``holds`` is ``margin >= -MARGIN_TOL``.  For the two
statements whose constant is unspecified the report carries the measured
ratio in ``empirical_constant`` and uses ``rhs = 0``.
"""

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .densities import (
    DEFAULT_CONFIG,
    Gaussian,
    Grid,
    bakry_emery_constant,
    check_bakry_emery,
    check_log_concave,
    gaussian_smooth,
    sum_density,
)
from .entropy import differential_entropy, epi_deficit, shannon_epi_report
from .errors import ConfigurationError, DomainError, HypothesisError, SingularMapError
from .transport import delta_inf, gaussian_fit_w2, gaussian_map, growth_profile, w1_1d, w2_1d

__all__ = [
    "MARGIN_TOL",
    "BoundReport",
    "certified_eta",
    "rioul_lower_bound",
    "rioul_check",
    "thm1_check",
    "cor2_check",
    "cor3_check",
    "cor4_check",
    "thm5_ratio",
    "prop8_check",
    "measured_growth_constant",
    "twosided_growth_check",
    "SmoothingReport",
    "smoothing_continuity_check",
]

MARGIN_TOL = 1e-5
HERMITE_ORDER = 64
# a Hermite-order doubling may move the Rioul expectation by at most this much
HERMITE_GATE = 1e-6
DEGENERATE_TOL = 1e-10
STANDARD = Gaussian(1.0)


@dataclass(frozen=True)
class BoundReport:
    inequality: str
    parameters: dict
    lhs: float
    rhs: float
    margin: float
    holds: bool
    empirical_constant: float = None
    degenerate: bool = False

    def to_dict(self):
        out = asdict(self)
        out["parameters"] = dict(sorted(self.parameters.items()))
        return out


def _report(inequality, parameters, lhs, rhs, empirical_constant=None, degenerate=False):
    lhs, rhs = float(lhs), float(rhs)
    margin = lhs - rhs
    return BoundReport(
        inequality=inequality,
        parameters={k: (float(v) if isinstance(v, (float, np.floating)) else v)
                    for k, v in parameters.items()},
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        holds=bool(margin >= -MARGIN_TOL),
        empirical_constant=None if empirical_constant is None else float(empirical_constant),
        degenerate=bool(degenerate),
    )


def _check_t(t):
    if not 0.0 < t < 1.0:
        raise DomainError("t must lie in (0, 1)")


def _require_bakry_emery(d, eta, cfg):
    if isinstance(d, Grid):
        raise HypothesisError("Bakry-Emery condition cannot be verified for a Grid density")
    check_bakry_emery(d, eta, cfg)


def certified_eta(d, cfg=DEFAULT_CONFIG):
    """Largest Bakry-Emery parameter verified on the 10^4-point check grid."""
    eta = bakry_emery_constant(d, cfg)
    if not eta > 0:
        raise HypothesisError(f"{d!r} is not uniformly log-concave (curvature minimum {eta:.6g})")
    return eta


def _hermite(order):
    x, w = np.polynomial.hermite_e.hermegauss(order)
    return x, w / math.sqrt(2.0 * math.pi)


def _rioul_at(d1, d2, t, order):
    x, w = _hermite(order)
    try:
        a = np.asarray(gaussian_map(d1).derivative(x))
        b = np.asarray(gaussian_map(d2).derivative(x))
    except SingularMapError as exc:
        raise SingularMapError(f"Brenier map derivative vanishes at a Hermite node: {exc}") from exc
    if np.any(a <= 0) or np.any(b <= 0) or not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise SingularMapError("Brenier map derivative is not positive and finite at every Hermite node")
    mixed = np.log(t * a[:, None] + (1.0 - t) * b[None, :])
    return float(w @ mixed @ w - t * np.dot(w, np.log(a)) - (1.0 - t) * np.dot(w, np.log(b)))


def rioul_lower_bound(d1, d2, t, cfg=DEFAULT_CONFIG):
    """``E[log(t T1'(X) + (1-t) T2'(Y)) - t log T1'(X) - (1-t) log T2'(Y)]``.

    ``T_i`` push the standard normal onto ``d_i`` and ``X, Y`` are independent
    standard normals.  Evaluated with a tensorized 64 x 64 Gauss-Hermite rule;
    the result is rejected unless the 128 x 128 rule agrees to 1e-6.
    """
    _check_t(t)
    value = _rioul_at(d1, d2, t, HERMITE_ORDER)
    check = _rioul_at(d1, d2, t, 2 * HERMITE_ORDER)
    if abs(check - value) > HERMITE_GATE:
        raise ConfigurationError(
            f"Gauss-Hermite expectation not converged: order 64 gives {value:.10g}, order 128 gives {check:.10g}"
        )
    return value


def rioul_check(d1, d2, t, cfg=DEFAULT_CONFIG, deficit=None):
    """Deficit against the Gauss-Hermite Rioul expectation."""
    lhs = epi_deficit(d1, d2, t, cfg).deficit if deficit is None else deficit
    return _report("rioul", {"t": t}, lhs, rioul_lower_bound(d1, d2, t, cfg))

def thm1_check(d1, d2, t, eta, cfg=DEFAULT_CONFIG, deficit=None):
    """Deficit against ``eta t (1-t) / 2 * Delta(d1, d2)``.

    Both densities must satisfy ``-(log f)'' >= eta`` on the check grid.
    """
    _check_t(t)
    _require_bakry_emery(d1, eta, cfg)
    _require_bakry_emery(d2, eta, cfg)
    lhs = epi_deficit(d1, d2, t, cfg).deficit if deficit is None else deficit
    s1, s2, delta = delta_inf(d1, d2, cfg)
    rhs = eta * t * (1.0 - t) / 2.0 * delta
    return _report("thm1", {"t": t, "eta": eta, "delta_inf": delta, "s1_star": s1, "s2_star": s2}, lhs, rhs)


def cor2_check(d1, d2, t, eta, cfg=DEFAULT_CONFIG):
    """The same bound after rescaling both densities by ``sqrt(eta)`` to unit modulus."""
    _check_t(t)
    k = math.sqrt(eta)
    rep = thm1_check(d1.scaled(k), d2.scaled(k), t, 1.0, cfg)
    params = dict(rep.parameters, eta=eta, rescale=k)
    return _report("cor2", params, rep.lhs, rep.rhs)


def cor3_check(d1, d2, t, eta, cfg=DEFAULT_CONFIG, deficit=None):
    """Deficit against ``eta t (1-t) / 8 (dW2(d1)^2 + dW2(d2)^2 + W2(d1, d2)^2)``."""
    _check_t(t)
    _require_bakry_emery(d1, eta, cfg)
    _require_bakry_emery(d2, eta, cfg)
    lhs = epi_deficit(d1, d2, t, cfg).deficit if deficit is None else deficit
    dw1 = gaussian_fit_w2(d1, cfg)[1]
    dw2 = gaussian_fit_w2(d2, cfg)[1]
    w2 = w2_1d(d1, d2, cfg)
    rhs = eta * t * (1.0 - t) / 8.0 * (dw1 + dw2 + w2)
    return _report("cor3", {"t": t, "eta": eta, "dW2_mu": dw1, "dW2_nu": dw2, "W2_sq": w2}, lhs, rhs)


def cor4_check(d1, d2, eta_mu, eta_nu, cfg=DEFAULT_CONFIG):
    """Entropy power of the convolution against ``(N(mu) + N(nu)) * Delta_EPI``."""
    for d, eta in ((d1, eta_mu), (d2, eta_nu)):
        _require_bakry_emery(d, eta, cfg)
    rep = shannon_epi_report(d1, d2, eta_mu, eta_nu, cfg)
    rhs = (rep.N_mu + rep.N_nu) * rep.delta_epi_factor
    params = {"eta_mu": eta_mu, "eta_nu": eta_nu, "theta": rep.theta, "delta_epi_factor": rep.delta_epi_factor,
              "N_mu": rep.N_mu, "N_nu": rep.N_nu}
    return _report("cor4", params, rep.N_conv, rhs)


def thm5_ratio(d, t, cfg=DEFAULT_CONFIG):
    """Measured constant ``deficit(d, gamma) / (t (1-t) min(W1(d, gamma)^2, 1))``.

    ``gamma`` is the standard Gaussian.  The report has ``rhs = 0``; when
    ``W1 = 0`` the ratio is undefined and the report is flagged degenerate.
    """
    _check_t(t)
    if not isinstance(d, Grid):
        check_log_concave(d, cfg)
    w1 = w1_1d(d, STANDARD, cfg)
    deficit = epi_deficit(d, STANDARD, t, cfg).deficit
    params = {"t": t, "n": 1, "W1": w1}
    if w1 <= DEGENERATE_TOL:
        return _report("thm5", params, deficit, 0.0, degenerate=True)
    ratio = deficit / (t * (1.0 - t) * min(w1 * w1, 1.0))
    return _report("thm5", params, deficit, 0.0, empirical_constant=ratio)


def measured_growth_constant(d, z_max=8.0, points=4001):
    """``sup_z T'(z) / sqrt(1 + z^2)`` for the Gaussian-to-``d`` map, with a growth check.

    Raises HypothesisError when the ratio at the grid edge exceeds 1.5 times
    its value at half the edge, i.e. the map grows faster than linearly.
    """
    z, ratio = growth_profile(d, z_max, points)
    if not np.all(np.isfinite(ratio)):
        raise HypothesisError("growth ratio is not finite on the grid")
    edge = max(ratio[0], ratio[-1])
    half = np.abs(np.abs(z) - 0.5 * z_max) < 0.5 * (z[1] - z[0])
    if edge > 1.5 * float(np.max(ratio[half])):
        raise HypothesisError(f"Brenier map growth is super-linear: T'/sqrt(1+z^2) reaches {edge:.4g} at |z|={z_max}")
    return float(np.max(ratio))


def prop8_check(d, t, cfg=DEFAULT_CONFIG):
    """Deficit against ``t (1-t) / (8 c^2 n) W2(d, gamma)^2`` with the measured growth constant ``c``."""
    _check_t(t)
    c = max(1.0 + 1e-9, measured_growth_constant(d))
    lhs = epi_deficit(d, STANDARD, t, cfg).deficit
    w2 = w2_1d(d, STANDARD, cfg)
    rhs = t * (1.0 - t) / (8.0 * c * c) * w2
    return _report("prop8", {"t": t, "n": 1, "c": c, "W2_sq": w2}, lhs, rhs)


def twosided_growth_check(d1, d2, t, cfg=DEFAULT_CONFIG):
    """Measured constant ``deficit * c^2 n^2 / (t (1-t) Delta)`` with ``c = max(c1, c2)``."""
    _check_t(t)
    c = max(measured_growth_constant(d1), measured_growth_constant(d2))
    deficit = epi_deficit(d1, d2, t, cfg).deficit
    _, _, delta = delta_inf(d1, d2, cfg)
    params = {"t": t, "n": 1, "c": c, "delta_inf": delta}
    if delta <= DEGENERATE_TOL:
        return _report("twosided", params, deficit, 0.0, degenerate=True)
    return _report("twosided", params, deficit, 0.0, empirical_constant=deficit * c * c / (t * (1.0 - t) * delta))


@dataclass(frozen=True)
class SmoothingReport:
    """Delta and deficit of Gaussian-smoothed pairs next to the unsmoothed values."""

    t: float
    delta: float
    deficit: float
    rows: list = field(default_factory=list)

    @property
    def delta_gaps(self):
        return [abs(r[1] - self.delta) for r in self.rows]

    @property
    def deficit_gaps(self):
        return [abs(r[2] - self.deficit) for r in self.rows]

    @property
    def shrinking(self):
        """Both gap sequences nonincreasing up to the margin tolerance."""
        return all(b <= a + MARGIN_TOL for gaps in (self.delta_gaps, self.deficit_gaps)
                   for a, b in zip(gaps[:-1], gaps[1:]))

    def to_dict(self):
        return {"t": self.t, "delta": self.delta, "deficit": self.deficit,
                "rows": [{"s": s, "delta": dl, "deficit": df} for s, dl, df in self.rows]}


def _smoothed_deficit(d1, d2, s, t, cfg):
    # sqrt(t)(X + sqrt(s)Z1) + sqrt(1-t)(Y + sqrt(s)Z2) has the law of sqrt(t)X + sqrt(1-t)Y + sqrt(s)Z
    mixed = sum_density([d1.scaled(math.sqrt(t)), d2.scaled(math.sqrt(1.0 - t)), Gaussian(s)], cfg)
    h_mix = differential_entropy(mixed, cfg)
    h1 = differential_entropy(gaussian_smooth(d1, s, cfg), cfg)
    h2 = differential_entropy(gaussian_smooth(d2, s, cfg), cfg)
    return h_mix - t * h1 - (1.0 - t) * h2


def smoothing_continuity_check(d1, d2, s_list, t=0.5, cfg=DEFAULT_CONFIG):
    """``(s, Delta(mu_s, nu_s), deficit_t(mu_s, nu_s))`` for each ``s`` plus the unsmoothed values."""
    s_list = [float(s) for s in s_list]
    if any(s <= 0 for s in s_list) or any(b >= a for a, b in zip(s_list[:-1], s_list[1:])):
        raise DomainError("s_list must be positive and strictly decreasing")
    _check_t(t)
    rows = []
    for s in s_list:
        g1 = gaussian_smooth(d1, s, cfg)
        g2 = gaussian_smooth(d2, s, cfg)
        rows.append((s, delta_inf(g1, g2, cfg)[2], _smoothed_deficit(d1, d2, s, t, cfg)))
    return SmoothingReport(t=t, delta=delta_inf(d1, d2, cfg)[2], deficit=epi_deficit(d1, d2, t, cfg).deficit, rows=rows)
