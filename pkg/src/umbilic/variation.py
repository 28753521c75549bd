"""Radial deformations of geodesic spheres: evolution checks, second variations
and sharpness ratios.

Every experiment deforms the geodesic sphere of radius ``a`` along the radial
path ``rho = a + t f``.  At ``t = 0`` its velocity is exactly ``f`` times the
unit normal, so first and second variations at the sphere agree with those of
the normal deformation with speed ``f``.

Quadratic quantities are always sampled at ``+t`` and ``-t`` and averaged:
even-degree harmonics are not odd under ``theta -> pi - theta``, so one-sided
samples carry an ``O(t)`` error that the symmetric pair removes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .extrapolate import observed_order, richardson, richardson_table
from .geometry import (
    FunctionalReport,
    ZonalHypersurface,
    functional_report,
    shape_field,
)
from .spaceform import GeodesicSphere, max_radius, xi
from .symfun import sigma_batch
from .zonal import (
    ZonalFunction,
    ZonalGrid,
    bochner_traceless_hessian,
    make_grid,
    sphere_area,
    sphere_laplacian,
    zonal_harmonic,
    zonal_hessian,
)

__all__ = [
    "DeformationSpec",
    "SecondVariation",
    "SharpnessResult",
    "EvolutionLine",
    "RicciPositivityError",
    "ConvergenceError",
    "EQUATIONS",
    "optimal_constant",
    "radial_surface",
    "deformed_report",
    "functional_value",
    "predicted_ratio_limits",
    "predicted_second_variation",
    "numeric_second_variation",
    "sharpness_extrapolate",
    "evolution_residuals",
    "sr_rate_forms",
    "ricci_threshold",
]


class RicciPositivityError(ArithmeticError):
    """A deformed surface lost positive Ricci curvature."""


class ConvergenceError(ArithmeticError):
    """A finite-difference estimate failed to converge."""


# identifiers of the evolution checks, with the closed form each one targets
EQUATIONS = {
    "volume-evolution": "d/dt Vol = int f H",
    "mean-curvature-evolution": "d/dt H = -Lap f - |A|^2 f - n c f",
    "sr-evolution": "d/dt s_r = -C(n-1,r-1) lam^(r-1) (Lap f + n lam^2 f + n c f)",
    "traceless-second-fundamental-form": "int |Aring|^2 / t^2 -> int |traceless Hess f|^2",
    "traceless-newton-tensor": "int |Pring_r|^2 / t^2 -> lam^(2(r-1)) C(n-2,r-1)^2 int |traceless Hess f|^2",
    "mean-curvature-average": "d/dt Hbar = mean(d/dt H)",
    "sr-average": "d/dt sbar_r = mean(d/dt s_r)",
}


def optimal_constant(n: int, r: int = 1) -> float:
    """``sqrt(n(n-1)/(n-r)^2)``; for ``r = 1`` this is ``sqrt(n/(n-1))``."""
    if not 1 <= r <= n - 1:
        raise ValueError(f"r={r} outside 1..{n - 1}")
    return math.sqrt(n * (n - 1) / (n - r) ** 2)


def _default_t0(a: float, k: int) -> float:
    # |Aring| grows like t k^2 / a^2; keep the quadratic regime for every k
    return 1e-2 * a / max(1.0, k * k / 10)


@dataclass(frozen=True, eq=False)
class DeformationSpec:
    """Radial deformation ``a + t f_k`` of a geodesic sphere.

    ``f_k`` is the degree-``k`` zonal harmonic with ``f_k(1) = 1`` (sup norm
    1); amplitudes are ``t_j = t0 2^-j`` for ``j = 0..J``.
    """

    sphere: GeodesicSphere
    k: int
    r_list: tuple = ()
    N: int = 256
    t0: float | None = None
    J: int = 6

    def __post_init__(self):
        n, a = self.sphere.n, self.sphere.a
        if self.k < 1:
            raise ValueError(f"harmonic degree k must be >= 1, got {self.k}")
        if self.k > self.N - 2:
            raise ValueError(f"k={self.k} too large for N={self.N}")
        if self.J < 2:
            raise ValueError("need at least three amplitudes (J >= 2)")
        r_list = tuple(sorted(set(int(r) for r in self.r_list)))
        for r in r_list:
            if not 1 <= r <= n - 1:
                raise ValueError(f"r={r} outside 1..{n - 1}")
        object.__setattr__(self, "r_list", r_list)
        t0 = _default_t0(a, self.k) if self.t0 is None else float(self.t0)
        if not 0 < t0 <= 0.1 * a:
            raise ValueError(f"t0={t0} must lie in (0, 0.1 a]")
        if a + t0 >= max_radius(self.sphere.c):
            raise ValueError(f"a + t0 = {a + t0} is not a valid radius")
        object.__setattr__(self, "t0", t0)

    @property
    def amplitudes(self) -> np.ndarray:
        return self.t0 * 2.0 ** -np.arange(self.J + 1)

    @property
    def grid(self) -> ZonalGrid:
        return make_grid(self.sphere.n, self.N)

    @property
    def profile(self) -> ZonalFunction:
        return zonal_harmonic(self.grid, self.k)


def _surface(sphere: GeodesicSphere, f: ZonalFunction, t: float) -> ZonalHypersurface:
    return ZonalHypersurface(sphere.n, sphere.c, ZonalFunction(f.grid, sphere.a + t * f.values))


def radial_surface(spec: DeformationSpec, t: float) -> ZonalHypersurface:
    """The hypersurface ``rho = a + t f_k``."""
    if abs(t) > spec.t0 * (1 + 1e-12):
        raise ValueError(f"|t|={abs(t)} exceeds t0={spec.t0}")
    return _surface(spec.sphere, spec.profile, t)


def deformed_report(sphere: GeodesicSphere, f: ZonalFunction, t: float, r_list=()) -> FunctionalReport:
    return functional_report(shape_field(_surface(sphere, f, t)), r_list)


def functional_value(report: FunctionalReport, kind: str, C: float, r: int | None = None) -> float:
    """``C^2 int|Aring|^2 - int (H - Hbar)^2`` (kind ``F``) or
    ``C^2 int|Pring_r|^2 - int (s_r - sbar_r)^2`` (kind ``G``)."""
    if kind == "F":
        return C * C * report.norm_Aring - report.dev_H
    if kind == "G":
        d = report.per_r[r]
        return C * C * d["norm_Pring"] - d["dev_sr"]
    raise ValueError(f"unknown functional kind {kind!r}")


# -- closed forms ---------------------------------------------------------------


def predicted_ratio_limits(n: int, r: int, k: int) -> float:
    """Small-amplitude limit of ``int (s_r - sbar_r)^2 / int |Pring_r|^2``
    (``r = 1``: ``int (H - Hbar)^2 / int |Aring|^2``) for the degree-``k`` mode::

        n(n-1)/(n-r)^2 * (k-1)(k+n) / (k(k+n-1))
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not 1 <= r <= n - 1:
        raise ValueError(f"r={r} outside 1..{n - 1}")
    return n * (n - 1) / (n - r) ** 2 * (k - 1) * (k + n) / (k * (k + n - 1))


def predicted_second_variation(
    kind: str, C: float, sphere: GeodesicSphere, k: int, r: int = 1
) -> float:
    """Half the second derivative at ``t = 0`` of the functional, per unit
    ``int f^2`` (integral over the geodesic sphere), for the degree-``k`` mode.

    Kind ``F``: ``(C^2(n-1)/n - 1) xi^2 - (C^2(n-1) omega - 2n omega) xi - n^2 omega^2``.
    Kind ``G``: ``lam^(2(r-1)) C(n-1,r-1)^2 (alpha xi^2 - beta xi + gamma)`` with
    ``alpha = C^2(n-r)^2/(n(n-1)) - 1``, ``beta = C^2(n-r)^2 omega/(n-1) - 2n omega``,
    ``gamma = -n^2 omega^2``.
    """
    n, w = sphere.n, sphere.omega
    x = xi(sphere, k)
    C2 = C * C
    if kind == "F":
        return (C2 * (n - 1) / n - 1) * x * x - (C2 * (n - 1) * w - 2 * n * w) * x - n * n * w * w
    if kind == "G":
        if not 1 <= r <= n - 1:
            raise ValueError(f"r={r} outside 1..{n - 1}")
        alpha = C2 * (n - r) ** 2 / (n * (n - 1)) - 1
        beta = C2 * (n - r) ** 2 * w / (n - 1) - 2 * n * w
        gamma = -n * n * w * w
        pref = sphere.lam ** (2 * (r - 1)) * math.comb(n - 1, r - 1) ** 2
        return pref * (alpha * x * x - beta * x + gamma)
    raise ValueError(f"unknown functional kind {kind!r}")


# -- second variation -------------------------------------------------------------


@dataclass(frozen=True)
class SecondVariation:
    """Numeric half second derivative of ``F`` or ``G`` at the sphere.

    ``estimates[j] = (Q(t_j) + Q(-t_j)) / (2 t_j^2)``; ``extrapolated`` is the
    last entry of the two-level Richardson column.  ``l2 = int f^2`` over the
    geodesic sphere, so ``extrapolated / l2`` is comparable with
    :func:`predicted_second_variation`.
    """

    kind: str
    r: int
    C: float
    amplitudes: tuple
    estimates: tuple
    extrapolated: float
    l2: float
    order: float
    predicted: float

    @property
    def coefficient(self) -> float:
        return self.extrapolated / self.l2

    @property
    def rel_err(self) -> float:
        return abs(self.coefficient - self.predicted) / max(abs(self.predicted), 1e-300)


def _sphere_l2(sphere: GeodesicSphere, f: ZonalFunction) -> float:
    return sphere.sn**sphere.n * f.grid.integrate(f.values**2)


def numeric_second_variation(spec: DeformationSpec, kind: str, C: float, r: int = 1) -> SecondVariation:
    """Symmetric second differences of the functional, Richardson-extrapolated
    over the amplitude schedule.  Raises :class:`ConvergenceError` if the
    observed order is below 1.5."""
    sphere, f = spec.sphere, spec.profile
    rl = (r,) if kind == "G" else ()
    ts = spec.amplitudes
    est = []
    for t in ts:
        q = [functional_value(deformed_report(sphere, f, s, rl), kind, C, r) for s in (t, -t)]
        est.append((q[0] + q[1]) / (2 * t * t))
    est = np.array(est)
    limit = float(richardson_table(est)[-1][-1])
    l2 = _sphere_l2(sphere, f)
    scale = max(abs(limit), xi(sphere, spec.k) ** 2 * l2 * max(1.0, abs(sphere.lam)) ** (2 * (r - 1)))
    order = observed_order(est[0] - limit, est[1] - limit, floor=1e-12 * scale)
    if order < 1.5:
        raise ConvergenceError(
            f"second variation of {kind} (k={spec.k}, r={r}) did not converge: order {order:.2f}"
        )
    return SecondVariation(
        kind=kind,
        r=r,
        C=C,
        amplitudes=tuple(ts),
        estimates=tuple(est),
        extrapolated=limit,
        l2=l2,
        order=order,
        predicted=predicted_second_variation(kind, C, sphere, spec.k, r),
    )


# -- sharpness ------------------------------------------------------------------


@dataclass(frozen=True)
class SharpnessResult:
    """Ratio curves for one deformation.

    Keys of the dictionaries are ``"H"`` for ``int (H-Hbar)^2 / int|Aring|^2``
    and each ``r`` for ``int (s_r-sbar_r)^2 / int|Pring_r|^2``.
    ``residuals[key][j]`` is the change between consecutive entries of the
    final Richardson column.
    """

    spec: DeformationSpec
    amplitudes: tuple
    ratios: dict
    extrapolated: dict
    predicted: dict
    residuals: dict
    min_ricci: tuple

    @property
    def rel_err(self) -> dict:
        out = {}
        for key, lim in self.extrapolated.items():
            p = self.predicted[key]
            out[key] = abs(lim - p) / max(abs(p), 1e-300)
        return out


def sharpness_extrapolate(spec: DeformationSpec) -> SharpnessResult:
    """Deviation-to-traceless ratios along the amplitude schedule and their
    Richardson limits.

    Raises :class:`RicciPositivityError` if some sampled surface does not have
    positive Ricci curvature.
    """
    sphere, f = spec.sphere, spec.profile
    n = sphere.n
    keys = ["H", *spec.r_list]
    ts = spec.amplitudes
    ratios = {key: [] for key in keys}
    min_ric = []
    for t in ts:
        reps = [deformed_report(sphere, f, s, spec.r_list) for s in (t, -t)]
        m = min(rep.min_ricci for rep in reps)
        if not m > 0:
            raise RicciPositivityError(
                f"min Ricci {m:.3e} <= 0 at t={t:.3e} (n={n}, c={sphere.c}, a={sphere.a}, k={spec.k}); shrink t0"
            )
        min_ric.append(m)
        ratios["H"].append(sum(p.dev_H for p in reps) / sum(p.norm_Aring for p in reps))
        for r in spec.r_list:
            num = sum(p.per_r[r]["dev_sr"] for p in reps)
            den = sum(p.per_r[r]["norm_Pring"] for p in reps)
            ratios[r].append(num / den)
    extrap, pred, resid = {}, {}, {}
    for key in keys:
        col = richardson_table(ratios[key])[-1]
        extrap[key] = float(col[-1])
        resid[key] = tuple(np.abs(np.diff(col)))
        pred[key] = predicted_ratio_limits(n, 1 if key == "H" else key, spec.k)
    return SharpnessResult(
        spec=spec,
        amplitudes=tuple(ts),
        ratios={k: tuple(v) for k, v in ratios.items()},
        extrapolated=extrap,
        predicted=pred,
        residuals=resid,
        min_ricci=tuple(min_ric),
    )


def ricci_threshold(
    sphere: GeodesicSphere, f: ZonalFunction, t_max: float | None = None, samples: int = 64
) -> float:
    """Largest sampled amplitude ``T`` such that ``a + t f`` has positive Ricci
    curvature for every sampled ``|t| <= T``.

    ``[0, t_max]`` is scanned at ``samples`` points and the first sign change
    is refined by bisection.
    """
    sup = f.sup()
    if sup == 0:
        return math.inf
    room = min(sphere.a, max_radius(sphere.c) - sphere.a)
    if t_max is None:
        t_max = 0.99 * room / sup
    t_max = min(t_max, 0.99 * room / sup)

    def ok(t):
        try:
            return all(
                deformed_report(sphere, f, s).min_ricci > 0 for s in (t, -t)
            )
        except ValueError:
            return False

    ts = t_max * np.arange(1, samples + 1) / samples
    lo, hi = 0.0, None
    for t in ts:
        if ok(t):
            lo = t
        else:
            hi = t
            break
    if hi is None:
        return float(t_max)
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return float(lo)


# -- evolution equations ----------------------------------------------------------


@dataclass(frozen=True)
class EvolutionLine:
    """One evolution check: residuals at ``h`` and ``h/2`` relative to ``scale``."""

    equation_id: str
    r: int
    h: float
    residuals: tuple
    order: float
    extrapolated_residual: float
    scale: float

    @property
    def converged(self) -> bool:
        return self.order >= 1.5


def sr_rate_forms(sphere: GeodesicSphere, f: ZonalFunction, r: int):
    """``d/dt s_r`` at the sphere from the general trace form and from the
    umbilic closed form.

    Trace form: ``-tr(P_{r-1} Hess f) - f (s_1 s_r - (r+1) s_{r+1}) - c f (n-r+1) s_{r-1}``.
    Closed form: ``-C(n-1,r-1) lam^(r-1) (Lap f + n lam^2 f + n c f)``.
    """
    n, lam, c = sphere.n, sphere.lam, sphere.c
    if not 1 <= r <= n - 1:
        raise ValueError(f"r={r} outside 1..{n - 1}")
    fv = f.values
    s = [math.comb(n, j) * lam**j for j in range(n + 1)] + [0.0]
    p_prev = math.comb(n - 1, r - 1) * lam ** (r - 1)  # every eigenvalue of P_{r-1}
    mer, az = zonal_hessian(f, sphere.sn)
    tr_p_hess = p_prev * (mer + (n - 1) * az)
    trace_form = (
        -tr_p_hess
        - fv * (s[1] * s[r] - (r + 1) * s[r + 1])
        - c * fv * (n - r + 1) * s[r - 1]
    )
    lap = sphere_laplacian(f, sphere.sn).values
    closed = -math.comb(n - 1, r - 1) * lam ** (r - 1) * (lap + n * lam * lam * fv + n * c * fv)
    return trace_form, closed


def evolution_residuals(
    sphere: GeodesicSphere, f: ZonalFunction, r_list=(), h: float | None = None
) -> list[EvolutionLine]:
    """Central-difference checks of the evolution equations along ``a + t f``.

    Each line reports residuals at ``h`` and ``h/2`` (relative to a natural
    scale of the quantity), the observed order and the residual of the
    Richardson-extrapolated estimate.
    """
    n, lam, w, sn = sphere.n, sphere.lam, sphere.omega, sphere.sn
    g = f.grid
    if g.n != n:
        raise ValueError("grid and sphere dimensions differ")
    r_list = sorted(set(int(r) for r in r_list))
    sup = f.sup()
    if h is None:
        h = 1e-3 * sphere.a
    room = min(sphere.a, max_radius(sphere.c) - sphere.a)
    if h * sup >= 0.5 * room:
        raise ValueError(f"step h={h} too large for the admissible radius range")

    steps = (h, h / 2)
    reports = {s: deformed_report(sphere, f, s, r_list) for st in steps for s in (st, -st)}
    shapes = {s: shape_field(_surface(sphere, f, s)) for st in steps for s in (st, -st)}
    vol_n = sn**n
    area = sphere_area(n)
    curv = max(abs(lam), math.sqrt(w))
    lap = sphere_laplacian(f, sn).values
    fv = f.values
    mean_f = g.integrate(fv) / area
    l2 = vol_n * g.integrate(fv**2)
    hess_scale = vol_n * g.integrate(lap**2) + (n * w) ** 2 * l2
    boch = bochner_traceless_hessian(f, sphere) if abs(mean_f) <= 1e-10 * math.sqrt(
        g.integrate(fv**2) / area
    ) else _bochner_general(f, sphere)

    lines = []

    def add(eq_id, r, estimate, target, scale, pointwise=False):
        ests = [estimate(st) for st in steps]

        def err(e):
            d = np.asarray(e) - target
            return float(np.max(np.abs(d))) / scale if pointwise else abs(float(d)) / scale

        res = tuple(err(e) for e in ests)
        extrap = richardson(ests[0], ests[1], 2)
        lines.append(
            EvolutionLine(
                equation_id=eq_id,
                r=r,
                h=h,
                residuals=res,
                order=observed_order(res[0], res[1], floor=1e-12),
                extrapolated_residual=err(extrap),
                scale=scale,
            )
        )

    def central(fn):
        return lambda st: (fn(st) - fn(-st)) / (2 * st)

    def even(fn):
        return lambda st: (fn(st) + fn(-st)) / (2 * st * st)

    # (1) volume
    tgt = n * lam * vol_n * g.integrate(fv)
    add("volume-evolution", 0, central(lambda s: reports[s].volume), tgt,
        n * curv * vol_n * area * sup)
    # (2) mean curvature, pointwise
    dH = -lap - n * w * fv
    add("mean-curvature-evolution", 0, central(lambda s: shapes[s].H), dH,
        max(np.max(np.abs(dH)), n * w * sup), pointwise=True)
    # (4) traceless second fundamental form
    add("traceless-second-fundamental-form", 0, even(lambda s: reports[s].norm_Aring), boch,
        hess_scale)
    # (6) average of H
    add("mean-curvature-average", 0, central(lambda s: reports[s].mean_H), -n * w * mean_f,
        n * w * sup)

    for r in r_list:
        if not 1 <= r <= n - 1:
            raise ValueError(f"r={r} outside 1..{n - 1}")
        binom = math.comb(n - 1, r - 1)
        lam_pow = lam ** (r - 1)
        _, closed = sr_rate_forms(sphere, f, r)

        def s_r(s, r=r):
            return sigma_batch(shapes[s].spectrum())[:, r]

        # (3) s_r, pointwise
        add("sr-evolution", r, central(s_r), closed,
            binom * curv ** (r - 1) * max(np.max(np.abs(lap + n * w * fv)), n * w * sup),
            pointwise=True)
        # (5) traceless Newton tensor
        tgt = lam ** (2 * (r - 1)) * math.comb(n - 2, r - 1) ** 2 * boch
        add("traceless-newton-tensor", r, even(lambda s, r=r: reports[s].per_r[r]["norm_Pring"]),
            tgt, math.comb(n - 2, r - 1) ** 2 * curv ** (2 * (r - 1)) * hess_scale)
        # (7) average of s_r
        add("sr-average", r, central(lambda s, r=r: reports[s].per_r[r]["mean_sr"]),
            -binom * lam_pow * n * w * mean_f, binom * curv ** (r - 1) * n * w * sup)
    return lines


def _bochner_general(f: ZonalFunction, sphere: GeodesicSphere) -> float:
    # traceless Hessian integral from pointwise Hessian eigenvalues (any f)
    n = sphere.n
    mer, az = zonal_hessian(f, sphere.sn)
    return sphere.sn**n * f.grid.integrate((n - 1) / n * (mer - az) ** 2)
