"""Low-level quadrature, root-finding and scalar minimization helpers."""

import math

import numpy as np

GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)

INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def gl_integrate(f, a, b):
    """Integrate ``f`` over ``[a, b]`` with one 16-point Gauss-Legendre panel.

    ``a`` and ``b`` may be arrays of the same shape; ``f`` must be vectorized.
    Returns an array shaped like ``a``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[..., None] + half[..., None] * _GL_X
    return (f(x) * _GL_W).sum(axis=-1) * half


def panel_rule(edges, order=GL_ORDER):
    """Composite Gauss-Legendre nodes and weights over consecutive ``edges``."""
    xg, wg = (_GL_X, _GL_W) if order == GL_ORDER else np.polynomial.legendre.leggauss(order)
    edges = np.asarray(edges, dtype=float)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * xg).ravel()
    weights = (half[:, None] * wg).ravel()
    return nodes, weights


def composite_integrate(f, lo, hi, max_width, breakpoints=()):
    """Integrate a smooth vectorized ``f`` over ``[lo, hi]``.

    Panels never straddle a breakpoint and are at most ``max_width`` wide.
    """
    cuts = sorted({lo, hi, *(p for p in breakpoints if lo < p < hi)})
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil((b - a) / max_width)))
        nodes, weights = panel_rule(np.linspace(a, b, n + 1))
        total += float(np.dot(f(nodes), weights))
    return total


class CumulativeTable:
    """Left and right cumulative integrals of a smooth nonnegative function.

    The interval ``[lo, hi]`` is cut into equal cells whose masses are
    integrated once; a query adds one Gauss-Legendre panel over the partial
    cell.  ``upper`` accumulates from the right so far-tail masses keep their
    relative precision.
    """

    def __init__(self, f, lo, hi, cells):
        self.f = f
        self.lo = float(lo)
        self.hi = float(hi)
        self.cells = int(cells)
        self.edges = np.linspace(self.lo, self.hi, self.cells + 1)
        self.width = (self.hi - self.lo) / self.cells
        mass = gl_integrate(f, self.edges[:-1], self.edges[1:])
        self.left = np.concatenate([[0.0], np.cumsum(mass)])
        self.right = np.concatenate([np.cumsum(mass[::-1])[::-1], [0.0]])
        self.total = float(self.left[-1])

    def _cell(self, x):
        k = np.floor((x - self.lo) / self.width).astype(np.int64)
        return np.clip(k, 0, self.cells - 1)

    def lower(self, x):
        """Integral from ``lo`` to ``x`` (clamped to the table range)."""
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        k = self._cell(x)
        return self.left[k] + gl_integrate(self.f, self.edges[k], x)

    def upper(self, x):
        """Integral from ``x`` to ``hi`` (clamped to the table range)."""
        x = np.clip(np.asarray(x, dtype=float), self.lo, self.hi)
        k = self._cell(x)
        return self.right[k + 1] + gl_integrate(self.f, x, self.edges[k + 1])


def bisect(g, lo, hi, xtol, maxiter=400):
    """Vectorized bisection for ``g(x) = 0`` with ``g(lo) <= 0 <= g(hi)``.

    ``g`` must be nondecreasing.  Returns the left endpoint of the final
    bracket when ``g`` is flat at zero, i.e. the generalized inverse.
    """
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    lo, hi = np.broadcast_arrays(lo, hi)
    lo, hi = lo.copy(), hi.copy()
    for _ in range(maxiter):
        width = hi - lo
        active = width > xtol + 4.0 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        if not active.any():
            break
        mid = lo + 0.5 * width
        below = g(mid) < 0.0
        lo = np.where(active & below, mid, lo)
        hi = np.where(active & ~below, mid, hi)
    return 0.5 * (lo + hi)


def golden_section(f, a, b, tol=1e-9, maxiter=500):
    """Minimize a unimodal scalar function on ``[a, b]`` by golden-section search.

    Returns ``(x_min, f_min)``.  The achievable accuracy in ``x`` is bounded
    below by roughly ``sqrt(machine eps)`` times the curvature scale, because
    function comparisons cannot resolve flatter differences.
    """
    c = b - INV_GOLDEN * (b - a)
    d = a + INV_GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_GOLDEN * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    fx = f(x)
    best = min((fx, x), (fc, c), (fd, d))
    return best[1], best[0]
