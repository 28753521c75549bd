"""Curvature of zonal radial graphs in space forms and their integral functionals.

A zonal hypersurface is the radial graph ``r = rho(theta)`` over the unit
sphere in polar coordinates ``dr^2 + sn_c(r)^2 eta`` around a pole.  Its shape
operator has two eigenvalues: the meridional one (multiplicity 1) and the
azimuthal one (multiplicity ``n - 1``).  Sign convention: outward normal, so a
geodesic sphere of small radius has positive curvatures ``cn/sn``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .spaceform import max_radius, sn_cn
from .symfun import newton_eigs_batch, sigma_batch
from .zonal import ZonalFunction, ZonalGrid

__all__ = [
    "ZonalHypersurface",
    "ShapeField",
    "FunctionalReport",
    "DegenerateGraph",
    "shape_field",
    "ricci_range",
    "functional_report",
    "inequality_margins",
    "zonal_spectrum",
]

_MIN_W = 1e-12


class DegenerateGraph(ValueError):
    """The radial graph is singular (``W`` vanishes somewhere)."""


@dataclass(frozen=True, eq=False)
class ZonalHypersurface:
    """Radial graph ``rho(theta) > 0`` over ``S^n`` in the space form of curvature ``c``."""

    n: int
    c: float
    rho: ZonalFunction

    def __post_init__(self):
        if self.rho.grid.n != self.n:
            raise ValueError("grid dimension does not match n")
        v = self.rho.values
        if np.any(v <= 0):
            raise ValueError("radial graph must have rho > 0")
        if np.any(v >= max_radius(self.c)):
            raise ValueError(f"rho exceeds the admissible radius pi/sqrt(c) for c={self.c}")

    @property
    def grid(self) -> ZonalGrid:
        return self.rho.grid

    @classmethod
    def from_values(cls, n: int, c: float, grid: ZonalGrid, values) -> "ZonalHypersurface":
        return cls(n=n, c=c, rho=ZonalFunction(grid, values))


@dataclass(frozen=True, eq=False)
class ShapeField:
    """Pointwise curvature data of a zonal hypersurface at the grid nodes."""

    surface: ZonalHypersurface
    kappa_mer: np.ndarray
    kappa_az: np.ndarray
    W: np.ndarray
    area_density: np.ndarray

    @property
    def n(self) -> int:
        return self.surface.n

    @property
    def c(self) -> float:
        return self.surface.c

    @property
    def grid(self) -> ZonalGrid:
        return self.surface.grid

    @property
    def H(self) -> np.ndarray:
        return self.kappa_mer + (self.n - 1) * self.kappa_az

    def integrate(self, values) -> float:
        """Integral over the hypersurface (with its induced area element)."""
        return self.grid.integrate(np.asarray(values) * self.area_density)

    def spectrum(self) -> np.ndarray:
        """Per-node principal curvatures, shape ``(N, n)``, meridional first."""
        return zonal_spectrum(self.kappa_mer, self.kappa_az, self.n)

    def ricci(self) -> tuple[np.ndarray, np.ndarray]:
        """Ricci eigenvalues ``(n-1)c + H k - k^2`` in the meridional and azimuthal directions."""
        H = self.H
        base = (self.n - 1) * self.c
        return (
            base + H * self.kappa_mer - self.kappa_mer**2,
            base + H * self.kappa_az - self.kappa_az**2,
        )


def zonal_spectrum(kappa_mer, kappa_az, n: int) -> np.ndarray:
    km = np.asarray(kappa_mer, dtype=float)
    ka = np.asarray(kappa_az, dtype=float)
    return np.concatenate([km[:, None], np.repeat(ka[:, None], n - 1, axis=1)], axis=1)


def shape_field(surface: ZonalHypersurface) -> ShapeField:
    """Principal curvatures of the radial graph.

    With ``rho'``, ``rho''`` the polar-angle derivatives and
    ``W = sqrt(rho'^2 + sn(rho)^2)``::

        kappa_mer = (-sn rho'' + 2 cn rho'^2 + sn^2 cn) / W^3
        kappa_az  = (cn + x rho_x / sn) / W

    where ``x rho_x = -cot(theta) rho'`` is regular at every interior node.
    """
    g = surface.grid
    rho = surface.rho.values
    sn, cn = sn_cn(surface.c, rho)
    d1 = g.d_dtheta(rho)
    d2 = g.d2_dtheta2(rho)
    x_dx = g.apply("x_dx", rho)
    W = np.sqrt(d1 * d1 + sn * sn)
    if np.min(W) < _MIN_W:
        raise DegenerateGraph(f"degenerate radial graph: min W = {np.min(W):.3e}")
    kappa_mer = (-sn * d2 + 2 * cn * d1 * d1 + sn * sn * cn) / W**3
    kappa_az = (cn + x_dx / sn) / W
    area = W * sn ** (surface.n - 1)
    return ShapeField(surface, kappa_mer, kappa_az, W, area)


def ricci_range(shape: ShapeField) -> tuple[float, float]:
    """Global ``(min, max)`` of the Ricci eigenvalues over nodes and directions."""
    mer, az = shape.ricci()
    return float(min(mer.min(), az.min())), float(max(mer.max(), az.max()))


@dataclass(frozen=True)
class FunctionalReport:
    """Integral functionals of one hypersurface.

    ``per_r`` maps ``r`` to a dict with keys ``mean_sr``, ``dev_sr``,
    ``norm_Pring`` and ``norm_P_meansr``.
    """

    n: int
    volume: float
    mean_H: float
    dev_H: float
    norm_Aring: float
    norm_A_meanH: float
    per_r: dict = field(default_factory=dict)
    min_ricci: float = math.nan
    scalar_residual: float = 0.0

    @property
    def mean_sr(self) -> dict:
        return {r: d["mean_sr"] for r, d in self.per_r.items()}

    def pythagoras_residuals(self) -> dict:
        """Relative residuals of the two Pythagoras identities.

        Key ``"H"``: ``|A - Hbar/n g|^2 = |Aring|^2 + dev_H / n``; key ``r``:
        ``|P_r - (n-r) sbar_r/n g|^2 = |Pring_r|^2 + (n-r)^2/n dev_sr``.
        """
        n = self.n
        out = {}
        rhs = self.norm_Aring + self.dev_H / n
        out["H"] = abs(self.norm_A_meanH - rhs) / max(abs(self.norm_A_meanH), abs(rhs), 1e-300)
        for r, d in self.per_r.items():
            rhs = d["norm_Pring"] + (n - r) ** 2 / n * d["dev_sr"]
            lhs = d["norm_P_meansr"]
            out[r] = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)
        return out


def functional_report(shape: ShapeField, r_list=()) -> FunctionalReport:
    """Evaluate every integral functional on ``shape``.

    ``s_r`` and the Newton eigenvalues come from the per-node spectrum
    ``(kappa_mer, kappa_az x (n-1))``.  Averages use the same quadrature as
    the integrals.
    """
    n = shape.n
    r_list = sorted(set(int(r) for r in r_list))
    for r in r_list:
        if not 1 <= r <= n - 1:
            raise ValueError(f"r={r} outside 1..{n - 1}")
    km, ka = shape.kappa_mer, shape.kappa_az
    H = shape.H
    vol = shape.integrate(1.0)
    mean_H = shape.integrate(H) / vol
    dev_H = shape.integrate((H - mean_H) ** 2)
    norm_Aring = shape.integrate((n - 1) / n * (km - ka) ** 2)
    q = mean_H / n
    norm_A_meanH = shape.integrate((km - q) ** 2 + (n - 1) * (ka - q) ** 2)

    spec = shape.spectrum()
    sig = sigma_batch(spec)
    mu = newton_eigs_batch(spec)
    per_r = {}
    for r in r_list:
        s_r = sig[:, r]
        mean_sr = shape.integrate(s_r) / vol
        p = mu[:, r, :]
        trace_part = ((n - r) / n * s_r)[:, None]
        per_r[r] = {
            "mean_sr": mean_sr,
            "dev_sr": shape.integrate((s_r - mean_sr) ** 2),
            "norm_Pring": shape.integrate(np.sum((p - trace_part) ** 2, axis=1)),
            "norm_P_meansr": shape.integrate(np.sum((p - (n - r) / n * mean_sr) ** 2, axis=1)),
        }

    mer, az = shape.ricci()
    tr_ric = mer + (n - 1) * az
    scal = n * (n - 1) * shape.c + 2 * sig[:, 2]
    size = np.maximum.reduce(
        [np.abs(tr_ric), np.abs(scal), np.full_like(scal, abs(n * (n - 1) * shape.c)), H * H]
    )
    scalar_residual = float(np.max(np.abs(tr_ric - scal) / np.maximum(size, 1e-300)))
    return FunctionalReport(
        n=n,
        volume=vol,
        mean_H=mean_H,
        dev_H=dev_H,
        norm_Aring=norm_Aring,
        norm_A_meanH=norm_A_meanH,
        per_r=per_r,
        min_ricci=float(min(mer.min(), az.min())),
        scalar_residual=scalar_residual,
    )


def inequality_margins(report: FunctionalReport) -> dict:
    """Margins of the two integral inequalities (non-negative under Ric >= 0).

    ``"H"``: ``n/(n-1) int|Aring|^2 - int (H - Hbar)^2``;
    ``r``: ``n(n-1) int|Pring_r|^2 - (n-r)^2 int (s_r - sbar_r)^2``.
    """
    n = report.n
    out = {"H": n / (n - 1) * report.norm_Aring - report.dev_H}
    for r, d in report.per_r.items():
        out[r] = n * (n - 1) * d["norm_Pring"] - (n - r) ** 2 * d["dev_sr"]
    return out
