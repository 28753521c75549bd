"""Space-form primitives: generalized sine/cosine and geodesic spheres."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["SpaceForm", "GeodesicSphere", "sn_cn", "sphere_invariants", "xi", "max_radius"]

# below this |c| r^2 the Taylor series is used
_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class SpaceForm:
    c: float

    def __post_init__(self):
        if not math.isfinite(self.c):
            raise ValueError(f"curvature must be finite, got {self.c}")


def max_radius(c: float) -> float:
    """Supremum of admissible geodesic radii (``pi/sqrt(c)`` or ``inf``)."""
    return math.pi / math.sqrt(c) if c > 0 else math.inf


def sn_cn(c: float, r):
    """Return ``(sn_c(r), cn_c(r))``; ``r`` may be a scalar or an array.

    ``sn_c`` solves ``y'' + c y = 0`` with ``y(0)=0, y'(0)=1`` and
    ``cn_c = sn_c'``.
    """
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if c > 0:
        s = math.sqrt(c)
        sn, cn = np.sin(s * r) / s, np.cos(s * r)
    elif c < 0:
        s = math.sqrt(-c)
        sn, cn = np.sinh(s * r) / s, np.cosh(s * r)
    else:
        sn, cn = r.copy(), np.ones_like(r)
    x = c * r * r
    small = np.abs(x) < _SERIES_CUTOFF
    if c != 0 and small.any():
        xs, rs = x[small], r[small]
        sn[small] = rs * (1 - xs / 6 + xs * xs / 120)
        cn[small] = 1 - xs / 2 + xs * xs / 24
    if scalar:
        return float(sn[0]), float(cn[0])
    return sn, cn


@dataclass(frozen=True)
class GeodesicSphere:
    """Geodesic sphere of radius ``a`` in the space form of curvature ``c``.

    ``lam`` is the (umbilic) principal curvature for the outward normal and
    ``omega = lam**2 + c = 1/sn_c(a)**2``.
    """

    n: int
    c: float
    a: float
    lam: float
    omega: float
    sn: float
    cn: float

    @property
    def H(self) -> float:
        return self.n * self.lam


def sphere_invariants(n: int, c: float, a: float) -> GeodesicSphere:
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    SpaceForm(c)
    if not (a > 0 and a < max_radius(c)):
        raise ValueError(f"invalid geodesic radius a={a} for c={c}")
    sn, cn = sn_cn(c, a)
    lam = cn / sn
    omega = 1.0 / (sn * sn)
    resid = abs(lam * lam + c - omega)
    # lam^2 + c cancels for c < 0 and large a; compare at the size of the summands
    if resid > 1e-14 * max(omega, lam * lam, abs(c)):
        raise ArithmeticError(f"omega consistency failed: residual {resid:.3e}")
    return GeodesicSphere(n=n, c=c, a=a, lam=lam, omega=omega, sn=sn, cn=cn)


def xi(sphere: GeodesicSphere, k: int) -> float:
    """``k``-th nonzero Laplace eigenvalue ``k(k+n-1)/sn_c(a)^2``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return k * (k + sphere.n - 1) * sphere.omega
