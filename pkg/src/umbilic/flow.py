"""Method-of-lines integration of a prescribed-speed normal deformation.

A zonal hypersurface near the geodesic sphere ``S(a)`` is the graph
``r = a + u(theta, t)``.  Moving it with normal speed ``f`` gives::

    u_t = f sqrt(1 + u_theta^2 / sn_c(a + u)^2),    u(., 0) = 0

which is advanced with the classical fourth-order Runge-Kutta method and
spectral derivatives in ``theta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import FunctionalReport, ZonalHypersurface, functional_report, shape_field
from .spaceform import GeodesicSphere, max_radius, sn_cn
from .variation import functional_value
from .zonal import ZonalFunction, ZonalGrid

__all__ = [
    "FlowState",
    "FlowRadiusError",
    "FlowComparison",
    "max_stable_dt",
    "flow_rhs",
    "integrate_normal_flow",
    "flow_vs_radial",
]


class FlowRadiusError(ArithmeticError):
    """The flowing surface left the admissible radius range."""

    def __init__(self, t: float, message: str):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True, eq=False)
class FlowState:
    sphere: GeodesicSphere
    u: ZonalFunction
    t: float

    @property
    def grid(self) -> ZonalGrid:
        return self.u.grid

    def surface(self) -> ZonalHypersurface:
        return ZonalHypersurface(
            self.sphere.n, self.sphere.c, ZonalFunction(self.grid, self.sphere.a + self.u.values)
        )


def max_stable_dt(sphere: GeodesicSphere, f: ZonalFunction) -> float:
    """``0.1 * (smallest node spacing in arclength) / max|f|``."""
    theta = np.arccos(f.grid.nodes)
    spacing = sphere.sn * float(np.min(np.abs(np.diff(theta))))
    sup = f.sup()
    return math.inf if sup == 0 else 0.1 * spacing / sup


def flow_rhs(sphere: GeodesicSphere, f: np.ndarray, grid: ZonalGrid, u: np.ndarray) -> np.ndarray:
    sn, _ = sn_cn(sphere.c, sphere.a + u)
    du = grid.d_dtheta(u)
    return f * np.sqrt(1 + (du / sn) ** 2)


def _check_radius(sphere: GeodesicSphere, u: np.ndarray, t: float):
    rho = sphere.a + u
    if not np.all(np.isfinite(rho)) or np.any(rho <= 0) or np.any(rho >= max_radius(sphere.c)):
        raise FlowRadiusError(t, f"flow left the admissible radius range at t={t:.6g}")


def integrate_normal_flow(
    sphere: GeodesicSphere, f: ZonalFunction, T: float, dt: float, keep: str = "all"
) -> list[FlowState]:
    """RK4 trajectory from ``u = 0`` up to time ``T``.

    The number of steps is ``ceil(T / dt)`` with the step shrunk to land on
    ``T`` exactly.  ``keep="all"`` returns every state, ``keep="last"`` only
    the initial and final ones.
    """
    if f.grid.n != sphere.n:
        raise ValueError("grid and sphere dimensions differ")
    if T < 0 or dt <= 0:
        raise ValueError("need T >= 0 and dt > 0")
    limit = max_stable_dt(sphere, f)
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"dt={dt} exceeds the resolution limit {limit:.3e}")
    steps = max(1, math.ceil(T / dt - 1e-12)) if T > 0 else 0
    h = T / steps if steps else 0.0
    g, fv = f.grid, f.values
    u = np.zeros_like(fv)
    states = [FlowState(sphere, ZonalFunction(g, u), 0.0)]
    for i in range(steps):
        t = i * h
        k1 = flow_rhs(sphere, fv, g, u)
        k2 = flow_rhs(sphere, fv, g, u + 0.5 * h * k1)
        k3 = flow_rhs(sphere, fv, g, u + 0.5 * h * k2)
        k4 = flow_rhs(sphere, fv, g, u + h * k3)
        u = u + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_radius(sphere, u, t + h)
        if keep == "all" or i == steps - 1:
            states.append(FlowState(sphere, ZonalFunction(g, u), (i + 1) * h))
    return states


@dataclass(frozen=True)
class FlowComparison:
    """Functionals of the flow surface and the radial surface ``a + t f`` at time ``t``."""

    t: float
    flow: FunctionalReport
    radial: FunctionalReport
    height_gap: float  # sup |u - t f|

    def difference(self, kind: str, C: float, r: int = 1) -> float:
        return functional_value(self.flow, kind, C, r) - functional_value(self.radial, kind, C, r)


def flow_vs_radial(
    sphere: GeodesicSphere, f: ZonalFunction, t: float, dt: float | None = None, r_list=()
) -> FlowComparison:
    """Compare the flow surface at time ``t`` with the radial surface ``a + t f``."""
    if dt is None:
        dt = max_stable_dt(sphere, f)
    if t == 0:
        u = np.zeros_like(f.values)
    else:
        u = integrate_normal_flow(sphere, f, t, min(dt, t), keep="last")[-1].u.values
    flow = functional_report(
        shape_field(ZonalHypersurface(sphere.n, sphere.c, ZonalFunction(f.grid, sphere.a + u))),
        r_list,
    )
    radial = functional_report(
        shape_field(
            ZonalHypersurface(sphere.n, sphere.c, ZonalFunction(f.grid, sphere.a + t * f.values))
        ),
        r_list,
    )
    return FlowComparison(t, flow, radial, float(np.max(np.abs(u - t * f.values))))
