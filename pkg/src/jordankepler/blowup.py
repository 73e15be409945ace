"""Higher-rank blow-up charts, the determinant line bundle and curvature.

A rank-lam tripotent c defines a chart (s, t) -> B_{t,-c} s of the
tautological resolution of the rank-lam Kepler variety, with s in the
Peirce 2-space and t in the Peirce 1-space of c.  The bundle of
equivalence classes [s, t, coeff]_c glued by ratios of Peirce-2
determinants carries a hermitian metric built from the cross-section
kernel; its curvature is computed by finite differences.

Sign convention note: the metric factor multiplying the cross-section
kernel is det(I + t t*) = delta(t, -t), the Peirce determinant of
B*_{t,-c} B_{t,-c} c.  (The minus sign in B_{t,-c} propagates into the
second argument of delta; direct block computation confirms this.)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, DomainError, OutOfChartError, RankMismatchError
from .kernels import KernelSpec, q_kernel_eval, truncated_kernel_eval
from .triples import (
    Tripotent,
    TripleSpace,
    delta,
    jordan_det,
    peirce_inverse,
    peirce_project,
    pseudo_inverse,
    random_element,
    random_tripotent,
    spectral_norm,
)

__all__ = [
    "ChartPoint",
    "BundleGerm",
    "CurvatureReport",
    "sigma_c",
    "chart_inverse",
    "theta_c",
    "transition_germ",
    "bundle_metric",
    "embedding_check",
    "chart_coordinates",
    "chart_point_from_coordinates",
    "curvature",
    "random_chart_point",
]


@dataclass(frozen=True)
class ChartPoint:
    """Local coordinates (c, s, t): s in the Peirce 2-space of c, t in the
    Peirce 1-space."""

    c: Tripotent
    s: np.ndarray
    t: np.ndarray

    def __post_init__(self, tol: float = 1e-9):
        scale = max(1.0, float(np.linalg.norm(self.s)), float(np.linalg.norm(self.t)))
        if np.linalg.norm(self.s - peirce_project(self.c, self.s, 2)) > tol * scale:
            raise DomainError("s not in the Peirce 2-space of c")
        if np.linalg.norm(self.t - peirce_project(self.c, self.t, 1)) > tol * scale:
            raise DomainError("t not in the Peirce 1-space of c")


@dataclass(frozen=True)
class BundleGerm:
    """A chart point with the coefficient of the equivalence class
    [s, t, coeff]_c of the determinant line bundle."""

    chart: ChartPoint
    coefficient: complex


def _bergman_frame(t: np.ndarray, c: np.ndarray):
    r, s = t.shape
    left = np.eye(r, dtype=complex) + t @ c.conj().T
    right = np.eye(s, dtype=complex) + c.conj().T @ t
    return left, right


def sigma_c(point: ChartPoint) -> np.ndarray:
    """Chart map sigma_c(s, t) = B_{t,-c} s = (I + t c*) s (I + c* t).

    Has rank <= rank(c), with equality exactly when N_c(s) != 0.
    """
    left, right = _bergman_frame(point.t, point.c.matrix)
    return left @ point.s @ right


def chart_inverse(space: TripleSpace, c: Tripotent, w: np.ndarray, tol: float = 1e-9) -> ChartPoint:
    """Invert sigma_c on a rank-lam element w.

    In the frame of c the chart reads blockwise
    w = [[s11, s11 t12], [t21 s11, t21 s11 t12]], so s11 is the leading
    block and t12, t21 are solved from the leading row and column.  The
    trailing block must then be consistent; a residual above tolerance
    means w does not have rank lam.
    """
    lam = c.rank
    wf = c.u.conj().T @ w @ c.w
    w11 = wf[:lam, :lam]
    w12 = wf[:lam, lam:]
    w21 = wf[lam:, :lam]
    w22 = wf[lam:, lam:]
    sv = np.linalg.svd(w11, compute_uv=False)
    scale = max(1.0, float(np.linalg.norm(w)))
    if sv.size == 0 or sv[-1] <= 1e-12 * scale:
        raise OutOfChartError("leading block singular; point outside the chart range")
    t12 = np.linalg.solve(w11, w12)
    t21 = np.linalg.solve(w11.conj().T, w21.conj().T).conj().T
    resid = float(np.linalg.norm(w22 - w21 @ t12))
    if resid > tol * scale:
        raise RankMismatchError(
            f"rank-{lam} consistency residual {resid:.2e} above tolerance"
        )
    sf = np.zeros_like(wf)
    sf[:lam, :lam] = w11
    tf = np.zeros_like(wf)
    tf[:lam, lam:] = t12
    tf[lam:, :lam] = t21
    return ChartPoint(c=c, s=c.u @ sf @ c.w.conj().T, t=c.u @ tf @ c.w.conj().T)


def theta_c(point: ChartPoint, tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """The Peirce-manifold point of the chart: z = B_{t,-c} c with its
    pseudo-inverse, representing the Peirce 2-space [z : zt].

    The pseudo-inverse is computed both from the closed chart formula
    zt = B_{t,-c} applied to the Peirce-2 Jordan-algebra inverse of
    B_{t,-t} c, and as the conjugated Moore-Penrose inverse; the two must
    agree.  (The inner inverse has to be the Jordan-algebra one: applying
    the inverse of the operator B_{t,-t} to c instead reverses the two
    hermitian block factors and is wrong for rank >= 2.)
    """
    cmat = point.c.matrix
    t = point.t
    left, right = _bergman_frame(t, cmat)
    z = left @ cmat @ right
    r, s = t.shape
    m1 = np.eye(r, dtype=complex) + t @ t.conj().T
    m2 = np.eye(s, dtype=complex) + t.conj().T @ t
    zt = left @ peirce_inverse(point.c, m1 @ cmat @ m2) @ right
    zt_mp = pseudo_inverse(z)
    gap = float(np.linalg.norm(zt - zt_mp))
    if gap > tol * max(1.0, float(np.linalg.norm(zt))):
        raise DomainError(f"pseudo-inverse formulas disagree by {gap:.2e}")
    return z, zt


def transition_germ(space: TripleSpace, germ: BundleGerm, c2: Tripotent) -> BundleGerm:
    """Re-express a bundle germ in the chart of c2.

    The underlying point w = sigma_c(s, t) is inverted in the new chart
    and the coefficient picks up the cocycle factor
    conj(N_{c2}(s2)) / conj(N_c(s)).
    """
    w = sigma_c(germ.chart)
    point2 = chart_inverse(space, c2, w)
    n1 = jordan_det(germ.chart.c, germ.chart.s)
    n2 = jordan_det(c2, point2.s)
    if abs(n1) == 0.0:
        raise OutOfChartError("N_c(s) vanishes; germ outside its own chart")
    return BundleGerm(chart=point2, coefficient=germ.coefficient * np.conj(n2) / np.conj(n1))


def bundle_metric(spec: KernelSpec, point: ChartPoint, tol: float | None = None) -> float:
    """Hermitian metric of the determinant bundle in the chart of c:

        h(s, t) = det(I + t t*) * Q(sigma_c(s,t), sigma_c(s,t)).

    Strictly positive wherever the series converges.
    """
    w = sigma_c(point)
    factor = delta(point.t, -point.t).real
    q = q_kernel_eval(spec, w, w, tol).value.real
    h = factor * q
    if h <= 0:
        raise DomainError(f"metric not positive: {h}")
    return float(h)


def embedding_check(spec: KernelSpec, point: ChartPoint) -> float:
    """Relative residual of the isometric-embedding identity

        K~(w, w) / |N_c(s)|^2 = det(I + t t*) * Q(w, w),  w = sigma_c(s,t).

    Vanishing N_c(s) means the point leaves the chart.
    """
    n = jordan_det(point.c, point.s)
    if abs(n) < 1e-13:
        raise OutOfChartError("N_c(s) = 0: embedding undefined in this chart")
    w = sigma_c(point)
    lhs = truncated_kernel_eval(spec, w, w).value.real / abs(n) ** 2
    rhs = delta(point.t, -point.t).real * q_kernel_eval(spec, w, w).value.real
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def _frame_blocks(point: ChartPoint):
    c = point.c
    lam = c.rank
    sf = c.u.conj().T @ point.s @ c.w
    tf = c.u.conj().T @ point.t @ c.w
    return sf[:lam, :lam], tf[:lam, lam:], tf[lam:, :lam]


def chart_coordinates(point: ChartPoint) -> np.ndarray:
    """Flatten (s, t) into d_lam complex coordinates in the frame of c:
    the s block (lam^2 entries), then t12, then t21."""
    s11, t12, t21 = _frame_blocks(point)
    return np.concatenate([s11.ravel(), t12.ravel(), t21.ravel()])


def chart_point_from_coordinates(space: TripleSpace, c: Tripotent, coords: np.ndarray) -> ChartPoint:
    """Inverse of :func:`chart_coordinates` for the frame of c."""
    lam = c.rank
    r, s = space.shape
    coords = np.asarray(coords, dtype=complex)
    if coords.size != space.d_lam:
        raise ConfigError(f"expected {space.d_lam} coordinates, got {coords.size}")
    n2 = lam * lam
    n12 = lam * (s - lam)
    sf = np.zeros((r, s), dtype=complex)
    tf = np.zeros((r, s), dtype=complex)
    sf[:lam, :lam] = coords[:n2].reshape(lam, lam)
    tf[:lam, lam:] = coords[n2 : n2 + n12].reshape(lam, s - lam)
    tf[lam:, :lam] = coords[n2 + n12 :].reshape(r - lam, lam)
    return ChartPoint(c=c, s=c.u @ sf @ c.w.conj().T, t=c.u @ tf @ c.w.conj().T)


@dataclass(frozen=True)
class CurvatureReport:
    """Mixed complex Hessian of log h at a point, by central differences.

    ``matrix`` holds d_i dbar_j log h (hermitian); the Chern curvature
    form of the metric is minus this matrix.  ``error_estimate`` is the
    Richardson difference between the two step sizes used.
    """

    coords: np.ndarray
    matrix: np.ndarray
    step: float
    error_estimate: float

    def __post_init__(self):
        asym = float(np.max(np.abs(self.matrix - self.matrix.conj().T)))
        if asym > 1e-8:
            raise DomainError(f"curvature matrix not hermitian: asymmetry {asym:.2e}")


def _log_metric(metric: Callable, coords: np.ndarray) -> float:
    val = metric(coords)
    if val <= 0:
        raise DomainError(f"metric sample not positive: {val}")
    return float(np.log(val))


def _real_hessian(g, x0: np.ndarray, h: float) -> np.ndarray:
    n = x0.size
    hess = np.empty((n, n))
    f0 = g(x0)

    def at(delta_vec):
        return g(x0 + delta_vec)

    for i in range(n):
        ei = np.zeros(n)
        ei[i] = h
        hess[i, i] = (at(ei) - 2.0 * f0 + at(-ei)) / (h * h)
        for j in range(i + 1, n):
            ej = np.zeros(n)
            ej[j] = h
            val = (at(ei + ej) - at(ei - ej) - at(-ei + ej) + at(-ei - ej)) / (4.0 * h * h)
            hess[i, j] = val
            hess[j, i] = val
    return hess


def _mixed_from_real(hess: np.ndarray, n: int) -> np.ndarray:
    hxx = hess[:n, :n]
    hyy = hess[n:, n:]
    hxy = hess[:n, n:]
    return 0.25 * ((hxx + hyy) + 1j * (hxy - hxy.T))


def curvature(
    metric: Callable,
    coords: np.ndarray,
    step: float = 1e-3,
    richardson: bool = True,
) -> CurvatureReport:
    """d dbar of log(metric) at ``coords`` by central finite differences.

    ``metric`` maps a complex coordinate vector to a positive real.  The
    real 2n-coordinate Hessian of log(metric) is assembled into the mixed
    complex derivatives; with ``richardson`` the stencil is evaluated at
    ``step`` and ``step/2`` and extrapolated, the spread serving as the
    error estimate.
    """
    if step <= 0:
        raise ConfigError("step must be positive")
    coords = np.asarray(coords, dtype=complex)
    n = coords.size

    def g(xy: np.ndarray) -> float:
        return _log_metric(metric, coords + xy[:n] + 1j * xy[n:])

    x0 = np.zeros(2 * n)
    k1 = _mixed_from_real(_real_hessian(g, x0, step), n)
    if not richardson:
        return CurvatureReport(coords=coords, matrix=k1, step=step, error_estimate=float("nan"))
    k2 = _mixed_from_real(_real_hessian(g, x0, step / 2.0), n)
    extrap = (4.0 * k2 - k1) / 3.0
    err = float(np.max(np.abs(k2 - k1))) / 3.0
    return CurvatureReport(coords=coords, matrix=extrap, step=step, error_estimate=err)


def random_chart_point(
    space: TripleSpace,
    rng: np.random.Generator,
    *,
    tripotent: Tripotent | None = None,
    s_scale: float = 0.25,
    t_scale: float = 0.35,
    min_det: float = 0.1,
) -> ChartPoint:
    """Seeded chart point with controlled scales and N_c(s) bounded away
    from zero, suitable for identity suites on the Kepler ball."""
    lam = space.lam
    for _ in range(64):
        c = tripotent if tripotent is not None else random_tripotent(space, lam, rng)
        s = peirce_project(c, random_element(space, rng), 2)
        norm = spectral_norm(s)
        if norm == 0.0:
            continue
        s *= s_scale / norm
        if abs(jordan_det(c, s)) < min_det * s_scale**lam:
            continue
        t = peirce_project(c, random_element(space, rng), 1)
        tn = spectral_norm(t)
        if tn > 0:
            t *= t_scale / tn
        return ChartPoint(c=c, s=s, t=t)
    raise DomainError("failed to sample a well-separated chart point")
