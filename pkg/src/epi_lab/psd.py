"""Spectral utilities for small symmetric matrices and the log-det concavity estimate.

The eigen-solver is a cyclic Jacobi iteration, which is simple, robust and
fast enough for the n <= 16 matrices used here.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import DomainError, NotPSDError

__all__ = [
    "as_symmetric",
    "spectral_decompose",
    "sqrtm_psd",
    "logdet",
    "lambda_max",
    "strong_convexity_modulus",
    "LemmaGapReport",
    "logdet_strong_convexity_check",
    "random_pd",
    "trial_rng",
    "lemma_fuzz",
]

SYMMETRY_TOL = 1e-12
OFFDIAG_TOL = 1e-12


def as_symmetric(M, tol=SYMMETRY_TOL):
    """Return ``M`` as a float array after checking it is square and symmetric."""
    A = np.array(M, dtype=float)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix entries must be finite")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if A.size and np.max(np.abs(A - A.T)) > tol * scale:
        raise DomainError("matrix is not symmetric")
    return 0.5 * (A + A.T)


def _jacobi(A, tol, max_sweeps):
    n = A.shape[0]
    V = np.eye(n)
    norm = math.sqrt(float(np.sum(A * A))) or 1.0
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.triu(A, 1) ** 2)) * 2.0)
        if off <= tol * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(diff) > 1e100 * abs(apq):
                    # tan of a negligible rotation angle
                    t = apq / diff
                else:
                    tau = diff / (2.0 * apq)
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    return np.diag(A).copy(), V


def spectral_decompose(M, tol=OFFDIAG_TOL, max_sweeps=100):
    """Eigen-decomposition ``M = V diag(w) V^T`` by cyclic Jacobi rotations.

    Returns
    -------
    w : ndarray
        Eigenvalues in ascending order.
    V : ndarray
        Orthonormal eigenvectors as columns; each column's largest-magnitude
        entry is made positive so the output is deterministic.
    """
    A = as_symmetric(M)
    w, V = _jacobi(A.copy(), tol, max_sweeps)
    order = np.argsort(w, kind="stable")
    w, V = w[order], V[:, order]
    pivots = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[pivots, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return w, V * signs


def _check_psd(w, strict, tol=1e-10):
    scale = max(1.0, float(np.max(np.abs(w))))
    if strict and not np.all(w > 0):
        raise NotPSDError(f"matrix is not positive definite (min eigenvalue {w.min():.3g})")
    if w.min() < -tol * scale:
        raise NotPSDError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")


def sqrtm_psd(M):
    """Principal square root of a positive semidefinite matrix."""
    w, V = spectral_decompose(M)
    _check_psd(w, strict=False)
    return (V * np.sqrt(np.clip(w, 0.0, None))) @ V.T


def logdet(M):
    """log det of a positive definite matrix."""
    w, _ = spectral_decompose(M)
    _check_psd(w, strict=True)
    return float(np.sum(np.log(w)))


def lambda_max(M):
    return float(spectral_decompose(M)[0][-1])


def strong_convexity_modulus(A, B):
    """Lower bound ``1 / max(lambda_max(A), lambda_max(B))**2`` on the Hessian of -log det along [A, B]."""
    wa, _ = spectral_decompose(A)
    wb, _ = spectral_decompose(B)
    _check_psd(wa, strict=True)
    _check_psd(wb, strict=True)
    return 1.0 / max(wa[-1], wb[-1]) ** 2


@dataclass(frozen=True)
class LemmaGapReport:
    t: float
    lhs: float
    base: float
    remainder: float
    margin: float

    def to_dict(self):
        return asdict(self)


def logdet_strong_convexity_check(A, B, t):
    """Evaluate both sides of the strengthened log-det concavity inequality.

    ``log det(tA + (1-t)B) >= t log det A + (1-t) log det B
    + t(1-t) / (2 max(lambda_max(A)^2, lambda_max(B)^2)) * ||A - B||_F^2``
    """
    if not 0.0 <= t <= 1.0:
        raise DomainError("t must lie in [0, 1]")
    A = as_symmetric(A)
    B = as_symmetric(B)
    if A.shape != B.shape:
        raise DomainError("A and B must have the same shape")
    wa, _ = spectral_decompose(A)
    wb, _ = spectral_decompose(B)
    _check_psd(wa, strict=True)
    _check_psd(wb, strict=True)
    lhs = logdet(t * A + (1.0 - t) * B)
    base = t * float(np.sum(np.log(wa))) + (1.0 - t) * float(np.sum(np.log(wb)))
    m = 1.0 / float(max(wa[-1], wb[-1])) ** 2
    remainder = t * (1.0 - t) * m / 2.0 * float(np.sum((A - B) ** 2))
    return LemmaGapReport(t=float(t), lhs=lhs, base=base, remainder=float(remainder), margin=float(lhs - base - remainder))


def trial_rng(seed, trial):
    """Counter-based generator for one fuzz trial; independent of execution order."""
    return np.random.Generator(np.random.Philox(key=(int(trial) << 64) | (int(seed) & (2**64 - 1))))


def random_pd(rng, n, ridge=1e-3):
    """``G^T G + ridge I`` with standard normal ``G``."""
    G = rng.standard_normal((n, n))
    return G.T @ G + ridge * np.eye(n)


def _fuzz_trial(seed, trial, dims, force_equal):
    rng = trial_rng(seed, trial)
    n = int(rng.integers(dims[0], dims[1] + 1))
    A = random_pd(rng, n)
    B = A.copy() if force_equal else random_pd(rng, n)
    t = float(rng.uniform())
    return n, t, A, B, logdet_strong_convexity_check(A, B, t)


def lemma_fuzz(trials, dims=(2, 8), seed=0, force_equal=False):
    """Run the log-det inequality on seeded random positive definite pairs.

    Returns a JSON-ready summary with the minimum margin and the pair that
    attains it (entries row-major).
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    lo, hi = int(dims[0]), int(dims[1])
    if not 1 <= lo <= hi:
        raise DomainError("dimension range must satisfy 1 <= lo <= hi")
    best = None
    violations = 0
    for k in range(trials):
        n, t, A, B, rep = _fuzz_trial(seed, k, (lo, hi), force_equal)
        if rep.margin < -1e-10:
            violations += 1
        if best is None or rep.margin < best[-1].margin:
            best = (k, n, t, A, B, rep)
    k, n, t, A, B, rep = best
    return {
        "trials": trials,
        "dims": [lo, hi],
        "seed": seed,
        "force_equal": bool(force_equal),
        "violations": violations,
        "min_margin": rep.margin,
        "argmin": {
            "trial": k,
            "n": n,
            "t": t,
            "A": A.ravel().tolist(),
            "B": B.ravel().tolist(),
            "lhs": rep.lhs,
            "base": rep.base,
            "remainder": rep.remainder,
        },
    }
