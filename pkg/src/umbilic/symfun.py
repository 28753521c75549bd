"""Elementary symmetric functions and Newton transformations.

Two arithmetic routes are provided:

* exact (scalar) routines that work with any numeric type closed under
  ``+`` and ``*`` (``int``, ``fractions.Fraction``, ``float``), used by the
  identity suite;
* batched ``numpy`` routines (``sigma_batch``, ``newton_eigs_batch``) that act
  on arrays of spectra of shape ``(..., n)`` and are used by the geometry code.

Newton transformations are always represented by their eigenvalues in the
principal frame: the ``i``-th eigenvalue of ``P_r`` is ``sigma_r`` of the
spectrum with ``eta_i`` removed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .extrapolate import observed_order

__all__ = [
    "Spectrum",
    "NewtonStack",
    "IdentityViolation",
    "sigma_all",
    "newton_stack",
    "newton_eigs_alternating",
    "newton_eigs_recursive",
    "trace_residuals",
    "squared_shape_residual",
    "combinatorial_identities",
    "ReillyRecord",
    "reilly_check",
    "newton_matrix",
    "sigma_batch",
    "newton_eigs_batch",
]


class IdentityViolation(ArithmeticError):
    """An identity that must hold exactly produced a non-zero residual."""


@dataclass(frozen=True)
class Spectrum:
    """Ordered principal curvatures ``eta_1..eta_n``."""

    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if len(vals) < 1:
            raise ValueError("a spectrum needs at least one eigenvalue")
        for v in vals:
            if isinstance(v, float) and not math.isfinite(v):
                raise ValueError(f"non-finite eigenvalue {v!r}")
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class NewtonStack:
    """The ladder ``sigma_0..sigma_n`` and ``P_0..P_n`` (as eigenvalues)."""

    n: int
    sigma: tuple
    p_eigs: tuple  # p_eigs[r][i]


def _values(spec) -> list:
    return list(spec.values if isinstance(spec, Spectrum) else spec)


def sigma_all(spec) -> list:
    """Return ``[sigma_0, ..., sigma_n]`` by expanding ``prod(1 + eta_i t)``.

    >>> sigma_all([1, 2, 3])
    [1, 6, 11, 6]
    """
    vals = _values(spec)
    e = [1] + [0] * len(vals)
    for j, eta in enumerate(vals):
        for r in range(j + 1, 0, -1):
            e[r] = e[r] + eta * e[r - 1]
    return e


def _deleted(vals: list, i: int) -> list:
    return vals[:i] + vals[i + 1:]


def newton_stack(spec) -> NewtonStack:
    vals = _values(spec)
    n = len(vals)
    sigma = sigma_all(vals)
    per_slot = [sigma_all(_deleted(vals, i)) + [0] for i in range(n)]
    p_eigs = tuple(tuple(per_slot[i][r] for i in range(n)) for r in range(n + 1))
    return NewtonStack(n=n, sigma=tuple(sigma), p_eigs=p_eigs)


def newton_eigs_alternating(spec) -> list:
    """``P_r`` eigenvalues from ``sum_j (-1)^j sigma_{r-j} A^j``."""
    vals = _values(spec)
    n = len(vals)
    sigma = sigma_all(vals)
    out = []
    for r in range(n + 1):
        row = []
        for eta in vals:
            acc = 0
            power = 1
            for j in range(r + 1):
                term = sigma[r - j] * power
                acc = acc + term if j % 2 == 0 else acc - term
                power = power * eta
            row.append(acc)
        out.append(row)
    return out


def newton_eigs_recursive(spec) -> list:
    """``P_r`` eigenvalues from ``P_r = sigma_r I - A P_{r-1}``."""
    vals = _values(spec)
    n = len(vals)
    sigma = sigma_all(vals)
    out = [[1] * n]
    for r in range(1, n + 1):
        out.append([sigma[r] - eta * prev for eta, prev in zip(vals, out[-1])])
    return out


def trace_residuals(spec) -> list:
    """Residuals of the three Newton trace identities for ``0 <= r <= n-1``.

    Returns one tuple per ``r``::

        (tr P_r - (n-r) s_r,
         tr A P_r - (r+1) s_{r+1},
         tr A^2 P_r - (s_1 s_{r+1} - (r+2) s_{r+2}))

    with ``s_{n+1} = 0``.
    """
    vals = _values(spec)
    n = len(vals)
    stack = newton_stack(vals)
    s = list(stack.sigma) + [0, 0]
    rows = []
    for r in range(n):
        mu = stack.p_eigs[r]
        t1 = sum(mu, 0) - (n - r) * s[r]
        t2 = sum((eta * m for eta, m in zip(vals, mu)), 0) - (r + 1) * s[r + 1]
        t3 = sum((eta * eta * m for eta, m in zip(vals, mu)), 0) - (
            s[1] * s[r + 1] - (r + 2) * s[r + 2]
        )
        rows.append((t1, t2, t3))
    return rows


def squared_shape_residual(spec) -> list:
    """Eigenvalue-level residual of ``A^2 - |A|^2/n = A Å - |Å|^2/n + (H/n) Å``."""
    vals = _values(spec)
    if all(isinstance(v, (int, Fraction)) for v in vals):
        vals = [Fraction(v) for v in vals]
    n = len(vals)
    mean = sum(vals, 0) / n
    norm2 = sum((v * v for v in vals), 0)
    ring = [v - mean for v in vals]
    ring2 = sum((x * x for x in ring), 0)
    out = []
    for v, x in zip(vals, ring):
        lhs = v * v - norm2 / n
        rhs = v * x - ring2 / n + mean * x
        out.append(lhs - rhs)
    return out


_COMBIN = {
    "pascal-alternating": "sum_i (-1)^i C(n, r-i) = C(n-1, r)",
    "pascal": "C(n+1, r) = C(n, r) + C(n, r-1)",
    "absorption": "n C(n-1, r) = (n-r) C(n, r)",
    "weighted-alternating": "sum_i (-1)^i C(n, r-i) i = -C(n-2, r-1)",
}


def _comb(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


def combinatorial_identities(n: int) -> list:
    """Evaluate the four binomial identities for every admissible ``r``.

    Rows are ``(identity, n, r, lhs, rhs, residual)`` in exact integers.
    Raises :class:`IdentityViolation` on any non-zero residual.
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    rows = []
    for r in range(0, n + 1):
        lhs = sum((-1) ** i * _comb(n, r - i) for i in range(r + 1))
        rows.append(("pascal-alternating", n, r, lhs, _comb(n - 1, r)))
        rows.append(("pascal", n, r, _comb(n + 1, r), _comb(n, r) + _comb(n, r - 1)))
        rows.append(("absorption", n, r, n * _comb(n - 1, r), (n - r) * _comb(n, r)))
        if r >= 1:
            lhs = sum((-1) ** i * _comb(n, r - i) * i for i in range(r + 1))
            rows.append(("weighted-alternating", n, r, lhs, -_comb(n - 2, r - 1)))
    table = [(name, nn, r, lhs, rhs, lhs - rhs) for name, nn, r, lhs, rhs in rows]
    bad = [row for row in table if row[5] != 0]
    if bad:
        name, nn, r, lhs, rhs, res = bad[0]
        raise IdentityViolation(
            f"{name} ({_COMBIN[name]}) fails at n={nn}, r={r}: {lhs} != {rhs}"
        )
    return table


def newton_matrix(B: np.ndarray, r: int) -> np.ndarray:
    """Dense ``Q_r = sum_j (-1)^j sigma_{r-j}(B) B^j`` for a symmetric ``B``."""
    B = np.asarray(B, dtype=float)
    n = B.shape[0]
    sigma = sigma_all(np.linalg.eigvalsh(B).tolist())
    Q = np.zeros_like(B)
    power = np.eye(n)
    for j in range(r + 1):
        Q += (-1) ** j * sigma[r - j] * power
        power = power @ B
    return Q


@dataclass(frozen=True)
class ReillyRecord:
    r: int
    h: float
    exact: float
    estimates: tuple  # central differences at h, h/2
    residuals: tuple  # relative residuals at h, h/2
    order: float
    extrapolated_residual: float

    @property
    def converged(self) -> bool:
        return self.order >= 1.5


_ROUNDOFF_FLOOR = 1e-12


def reilly_check(
    path: Callable[[float], np.ndarray],
    dpath: Callable[[float], np.ndarray],
    r: int,
    h: float = 1e-3,
) -> ReillyRecord:
    """Check ``d sigma_{r+1}/dt = tr(B'(0) Q_r(B(0)))`` by central differences.

    Residuals are relative to ``max(|exact|, |B'|_F |Q_r|_F)``.  A record with
    ``converged == False`` (observed order below 1.5) signals failure; when
    both residuals are at roundoff level the order is reported as ``inf``.
    """
    if h <= 0:
        raise ValueError("h must be positive")
    B0 = np.asarray(path(0.0), dtype=float)
    Q = newton_matrix(B0, r)
    dB = np.asarray(dpath(0.0), dtype=float)
    exact = float(np.trace(dB @ Q))
    scale = max(abs(exact), np.linalg.norm(dB) * np.linalg.norm(Q), 1e-300)

    def sig(t):
        return sigma_all(np.linalg.eigvalsh(path(t)).tolist())[r + 1]

    est = tuple((sig(s) - sig(-s)) / (2 * s) for s in (h, h / 2))
    res = tuple(abs(e - exact) / scale for e in est)
    # sigma_{r+1} linear in t (e.g. r = 0) makes the difference exact
    order = observed_order(res[0], res[1], floor=_ROUNDOFF_FLOOR)
    extrap = (4 * est[1] - est[0]) / 3
    return ReillyRecord(
        r=r,
        h=h,
        exact=exact,
        estimates=est,
        residuals=res,
        order=order,
        extrapolated_residual=abs(extrap - exact) / scale,
    )


# -- batched floating-point routines -------------------------------------------


def sigma_batch(eta: np.ndarray) -> np.ndarray:
    """``sigma_0..sigma_n`` along the last axis of ``eta`` (shape ``(..., n)``)."""
    eta = np.asarray(eta, dtype=float)
    n = eta.shape[-1]
    out = np.zeros(eta.shape[:-1] + (n + 1,))
    out[..., 0] = 1.0
    for j in range(n):
        out[..., 1:j + 2] = out[..., 1:j + 2] + eta[..., j, None] * out[..., 0:j + 1]
    return out


def newton_eigs_batch(eta: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``P_0..P_n``: result ``[..., r, i] = sigma_r(eta minus eta_i)``."""
    eta = np.asarray(eta, dtype=float)
    n = eta.shape[-1]
    if n == 1:
        out = np.zeros(eta.shape[:-1] + (2, 1))
        out[..., 0, 0] = 1.0
        return out
    keep = np.array([[j for j in range(n) if j != i] for i in range(n)])
    deleted = eta[..., keep]  # (..., n, n-1)
    sig = sigma_batch(deleted)  # (..., n, n)
    out = np.zeros(eta.shape[:-1] + (n + 1, n))
    out[..., :n, :] = np.swapaxes(sig, -1, -2)
    return out
