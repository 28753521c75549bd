"""Zonal functions on the round sphere S^n.

A zonal function depends only on the polar angle ``theta``; it is stored by
its values at Gauss-Jacobi nodes in ``x = cos(theta)``.  With ``alpha = beta =
(n-2)/2`` the Jacobi weight is exactly the density of ``S^n`` after
integrating out the ``S^{n-1}`` orbits::

    dmu = |S^{n-1}| (1 - x^2)^((n-2)/2) dx

The nodes are interior, so no pole ever has to be evaluated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .spaceform import GeodesicSphere

__all__ = [
    "ZonalGrid",
    "ZonalFunction",
    "gauss_jacobi",
    "make_grid",
    "zonal_harmonic",
    "sphere_laplacian",
    "zonal_hessian",
    "bochner_traceless_hessian",
    "sphere_area",
]


def sphere_area(m: int) -> float:
    """Area of the unit sphere ``S^m``: ``2 pi^((m+1)/2) / Gamma((m+1)/2)``."""
    return 2 * math.pi ** ((m + 1) / 2) / math.gamma((m + 1) / 2)


def _offdiag(N: int, a: float) -> np.ndarray:
    k = np.arange(1, N + 1, dtype=np.longdouble)
    a = np.longdouble(a)
    return np.sqrt(k * (k + 2 * a) / ((2 * k + 2 * a + 1) * (2 * k + 2 * a - 1)))


def _orthonormal(x: np.ndarray, N: int, beta: np.ndarray, p0):
    """Values of orthonormal ``p_0..p_N`` and ``p_N'`` at ``x``."""
    P = np.empty((N + 1, x.size), dtype=x.dtype)
    prev, dprev = np.zeros_like(x), np.zeros_like(x)
    cur, dcur = np.full_like(x, p0), np.zeros_like(x)
    P[0] = cur
    for k in range(N):
        b_prev = beta[k - 1] if k > 0 else 0
        nxt = (x * cur - b_prev * prev) / beta[k]
        dnxt = (cur + x * dcur - b_prev * dprev) / beta[k]
        prev, dprev, cur, dcur = cur, dcur, nxt, dnxt
        P[k + 1] = cur
    return P, dcur


def gauss_jacobi(N: int, a: float):
    """Nodes and weights of the ``N``-point Gauss rule for ``(1-x^2)^a`` on
    ``(-1, 1)``.

    Golub-Welsch eigenvalues seed a Newton polish on the orthonormal
    three-term recurrence, carried out in extended precision; weights come
    from the Christoffel function ``1 / sum_k p_k(x)^2``.
    """
    beta = _offdiag(N, a)
    x = eigh_tridiagonal(np.zeros(N), beta[: N - 1].astype(float), eigvals_only=True)
    x = x.astype(np.longdouble)
    mu0 = math.exp(math.lgamma(0.5) + math.lgamma(a + 1) - math.lgamma(a + 1.5))
    p0 = 1 / np.sqrt(np.longdouble(mu0))
    for _ in range(4):
        P, dp = _orthonormal(x, N, beta, p0)
        x = x - P[N] / dp
    x = 0.5 * (x - x[::-1])
    P, _ = _orthonormal(x, N, beta, p0)
    w = 1 / np.sum(P[:N] ** 2, axis=0)
    w = 0.5 * (w + w[::-1])
    return x.astype(float), w.astype(float)


def _operators(x: np.ndarray, n: int):
    """Differentiation operators on the stored nodes.

    Built in extended precision and rounded once: the edge rows of these
    matrices cancel by ~6 orders of magnitude, which float64 assembly (or
    forming ``D @ D``) cannot survive.
    """
    X = x.astype(np.longdouble)
    dx = X[:, None] - X[None, :]
    np.fill_diagonal(dx, 1)
    bary = 1 / np.prod(2 * dx, axis=1)
    bary /= np.max(np.abs(bary))
    inv = 1 / dx
    np.fill_diagonal(inv, 0)
    D = (bary[None, :] / bary[:, None]) * inv
    np.fill_diagonal(D, 0)
    np.fill_diagonal(D, -D.sum(axis=1))
    D2 = 2 * D * (np.diag(D)[:, None] - inv)
    np.fill_diagonal(D2, 0)
    np.fill_diagonal(D2, -D2.sum(axis=1))
    s2 = (1 - X * X)[:, None]
    ops = {
        "diff": D,
        "diff2": D2,
        "d_theta": -np.sqrt(s2) * D,
        "d2_theta": s2 * D2 - X[:, None] * D,
        "x_dx": X[:, None] * D,
        "lap": s2 * D2 - n * X[:, None] * D,
    }
    return {k: v.astype(float) for k, v in ops.items()}


@dataclass(frozen=True, eq=False)
class ZonalGrid:
    """Gauss-Jacobi grid on ``S^n`` in the variable ``x = cos(theta)``.

    ``diff`` maps node values of a polynomial of degree ``< N`` to node values
    of its ``x``-derivative.  The remaining operators (all annihilating
    constants) are the ones the geometry actually needs.
    """

    n: int
    N: int
    nodes: np.ndarray
    weights: np.ndarray
    sphere_factor: float
    diff: np.ndarray
    ops: dict = field(repr=False)

    @property
    def x(self) -> np.ndarray:
        return self.nodes

    def integrate(self, values) -> float:
        """Integral over the unit ``S^n`` of a zonal function given at nodes."""
        values = np.broadcast_to(np.asarray(values, dtype=float), self.nodes.shape)
        return self.sphere_factor * math.fsum(self.weights * values)

    def apply(self, name: str, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        # every operator kills constants; removing one first keeps the
        # roundoff proportional to the variation of v, not its size
        return self.ops[name] @ (v - v[0])

    def d_dx(self, values) -> np.ndarray:
        return self.apply("diff", values)

    def d_dtheta(self, values) -> np.ndarray:
        return self.apply("d_theta", values)

    def d2_dtheta2(self, values) -> np.ndarray:
        return self.apply("d2_theta", values)


@lru_cache(maxsize=32)
def make_grid(n: int, N: int = 256) -> ZonalGrid:
    """Grid for ``S^n`` with ``N`` nodes (cached; grids are immutable)."""
    if n < 2:
        raise ValueError(f"sphere dimension n must be >= 2, got {n}")
    if N < 8:
        raise ValueError(f"grid size N must be >= 8, got {N}")
    x, w = gauss_jacobi(N, (n - 2) / 2)
    ops = _operators(x, n)
    for arr in (x, w, *ops.values()):
        arr.setflags(write=False)
    return ZonalGrid(
        n=n,
        N=N,
        nodes=x,
        weights=w,
        sphere_factor=sphere_area(n - 1),
        diff=ops["diff"],
        ops=ops,
    )


@dataclass(frozen=True, eq=False)
class ZonalFunction:
    grid: ZonalGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.nodes.shape:
            raise ValueError(f"expected {self.grid.N} node values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("zonal function has non-finite values")
        object.__setattr__(self, "values", v)

    def __add__(self, other):
        ov = other.values if isinstance(other, ZonalFunction) else other
        return ZonalFunction(self.grid, self.values + ov)

    def __mul__(self, s):
        sv = s.values if isinstance(s, ZonalFunction) else s
        return ZonalFunction(self.grid, self.values * sv)

    __rmul__ = __mul__
    __radd__ = __add__

    def __neg__(self):
        return ZonalFunction(self.grid, -self.values)

    def __sub__(self, other):
        return self + (-other)

    def integral(self) -> float:
        """Integral over the unit sphere."""
        return self.grid.integrate(self.values)

    def mean(self) -> float:
        return self.integral() / sphere_area(self.grid.n)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


def gegenbauer_normalized(k: int, n: int, x) -> np.ndarray:
    """Degree-``k`` zonal harmonic of ``S^n`` normalized to 1 at ``x = 1``.

    Recurrence ``g_{j+1} = ((2j+n-1) x g_j - j g_{j-1}) / (j+n-1)``.
    """
    x = np.asarray(x, dtype=float)
    g_prev, g = np.ones_like(x), x.copy()
    if k == 0:
        return g_prev
    for j in range(1, k):
        g_prev, g = g, ((2 * j + n - 1) * x * g - j * g_prev) / (j + n - 1)
    return g


def zonal_harmonic(grid: ZonalGrid, k: int) -> ZonalFunction:
    if not 1 <= k <= grid.N - 2:
        raise ValueError(f"harmonic degree k={k} outside [1, {grid.N - 2}]")
    return ZonalFunction(grid, gegenbauer_normalized(k, grid.n, grid.nodes))


def sphere_laplacian(f: ZonalFunction, radius_sn: float) -> ZonalFunction:
    """Laplace-Beltrami operator of the round sphere of radius ``radius_sn``,
    ``[(1-x^2) f_xx - n x f_x] / radius_sn^2``."""
    return ZonalFunction(f.grid, f.grid.apply("lap", f.values) / radius_sn**2)


def zonal_hessian(f: ZonalFunction, radius_sn: float):
    """Hessian eigenvalues ``(meridional, azimuthal)`` of a zonal function on
    the round sphere of radius ``radius_sn``.

    The azimuthal eigenvalue ``cot(theta) f_theta / R^2 = -x f_x / R^2`` has
    multiplicity ``n - 1``; the trace is the Laplacian.
    """
    g = f.grid
    R2 = radius_sn**2
    return g.d2_dtheta2(f.values) / R2, -g.apply("x_dx", f.values) / R2


def bochner_traceless_hessian(f: ZonalFunction, sphere: GeodesicSphere) -> float:
    """``int |traceless Hess f|^2`` over the geodesic sphere, from the
    integrated Bochner formula::

        (n-1)/n int (Lap f)^2 + (n-1) omega int f Lap f
    """
    g = f.grid
    n = sphere.n
    if g.n != n:
        raise ValueError("grid and sphere dimensions differ")
    vol_factor = sphere.sn**n
    l2 = math.sqrt(f.grid.integrate(f.values**2) * sphere_area(n))
    if abs(f.integral()) > 1e-10 * l2:
        raise ValueError("bochner_traceless_hessian requires a mean-zero function")
    lap = sphere_laplacian(f, sphere.sn).values
    val = (n - 1) / n * g.integrate(lap * lap) + (n - 1) * sphere.omega * g.integrate(
        f.values * lap
    )
    return vol_factor * val
