"""Reproducing kernels of partition-weighted Hilbert modules on Kepler balls.

A coefficient sequence rho_mu > 0 (rho_0 = 1) determines a Hilbert module
of holomorphic functions on the rank-lam Kepler ball.  Its kernel is the
partition series

    K(z, w) = sum_mu  (d/r)_mu / rho_mu * (ra/2)_mu / (lam a/2)_mu * E^mu(z, w)

over partitions of length <= lam.  The submodule vanishing to order >= k
on the rank-(lam-1) stratum has the same series with every index shifted
by kappa = (k,..,k), and for k = 1 there is a non-vanishing cross-section
kernel Q obtained by shifting the coefficients but not the components.
All series are truncated at a caller-chosen total weight M, with the last
included weight shell reported as a tail estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import partitions as pt
from .errors import ConfigError, ConvergenceError, DomainError
from .partitions import EMPTY, Partition
from .triples import TripleSpace, standard_tripotent

__all__ = [
    "CoefficientSequence",
    "KernelSpec",
    "KernelValue",
    "kernel_coefficient",
    "kernel_eval",
    "truncated_kernel_eval",
    "q_kernel_eval",
    "normalized_kernel",
    "diagonal_point",
    "RecoveryResult",
    "recover_coefficients",
]


class CoefficientSequence:
    """Positive weights rho_mu with rho_0 = 1, one of three kinds.

    * ``nu-rule``: rho_mu = (d_lam/lam)_mu / (nu)_mu, the moment sequence
      of the weighted radial measure with exponent nu.
    * ``hardy``: rho_mu = 1 (point mass at the tripotent center).
    * ``explicit-table``: arbitrary positive table, e.g. recovered data.
    """

    def __init__(self, kind: str, *, table=None, nu=None, base=None, a=2.0, lam=None):
        self.kind = kind
        self.nu = nu
        self._table = dict(table) if table is not None else None
        self._base = base  # d_lam / lam for the nu rule
        self._a = a
        self._lam = lam
        if kind == "explicit-table":
            if self._table is None:
                raise ConfigError("explicit-table sequence needs a table")
            for mu, val in self._table.items():
                if val <= 0:
                    raise ConfigError(f"rho must be positive, got rho[{mu}] = {val}")
            if self._table.get(EMPTY, 1.0) != 1.0:
                raise ConfigError("rho at the empty partition must be 1")
        elif kind == "nu-rule":
            if nu is None or base is None or lam is None:
                raise ConfigError("nu-rule sequence needs nu, base and lam")
            if nu <= base + 0.5 * a * (lam - 1):
                raise ConfigError(
                    f"nu-rule needs nu > d_lam/lam + (a/2)(lam-1) = "
                    f"{base + 0.5 * a * (lam - 1)}, got nu = {nu}"
                )
        elif kind != "hardy":
            raise ConfigError(f"unknown coefficient sequence kind {kind!r}")

    @classmethod
    def hardy(cls) -> "CoefficientSequence":
        return cls("hardy")

    @classmethod
    def nu_rule(cls, space: TripleSpace, nu: float) -> "CoefficientSequence":
        return cls(
            "nu-rule", nu=float(nu), base=space.d_lam / space.lam, a=space.a, lam=space.lam
        )

    @classmethod
    def from_table(cls, table) -> "CoefficientSequence":
        return cls("explicit-table", table=table)

    @classmethod
    def from_measure(cls, measure, max_weight: int) -> "CoefficientSequence":
        """Tabulate the moment sequence of a radial measure up to |mu| <= max_weight."""
        lam = measure.space.lam
        table = {
            mu: measure.moment(mu)
            for mu in pt.enumerate_partitions(lam, max_weight)
        }
        return cls("explicit-table", table=table)

    def rho(self, mu: Partition) -> float:
        if self.kind == "hardy":
            return 1.0
        if self.kind == "nu-rule":
            num = pt.pochhammer(self._base, mu, self._a)
            den = pt.pochhammer(self.nu, mu, self._a)
            return float(num / den)
        try:
            return self._table[mu]
        except KeyError:
            raise DomainError(f"coefficient table has no entry for {mu}") from None

    def __repr__(self):
        if self.kind == "nu-rule":
            return f"CoefficientSequence(nu-rule, nu={self.nu})"
        if self.kind == "hardy":
            return "CoefficientSequence(hardy)"
        return f"CoefficientSequence(table, {len(self._table)} entries)"


@dataclass(frozen=True)
class KernelSpec:
    """A kernel series: space, coefficients, weight bound, vanishing order.

    ``weight_bound`` caps the total sesqui-degree of the retained terms,
    so the full kernel keeps |mu| <= M while the order-k truncation keeps
    |mu + kappa| <= M.  ``vanishing_order`` 0 means the full kernel.
    """

    space: TripleSpace
    coeffs: CoefficientSequence
    weight_bound: int
    vanishing_order: int = 0

    def __post_init__(self):
        if self.weight_bound < 0:
            raise ConfigError("weight bound must be nonnegative")
        if self.vanishing_order < 0:
            raise ConfigError("vanishing order must be nonnegative")
        if self.vanishing_order >= 1 and self.weight_bound < self.vanishing_order * self.space.lam:
            raise ConfigError(
                f"weight bound {self.weight_bound} below k*lam = "
                f"{self.vanishing_order * self.space.lam}; truncated series is empty"
            )


class KernelValue(NamedTuple):
    value: complex
    tail: float


def kernel_coefficient(spec: KernelSpec, mu: Partition) -> float:
    """Series coefficient of E^mu in the full kernel:
    (d/r)_mu / rho_mu * (ra/2)_mu / (lam a/2)_mu."""
    sp = spec.space
    if mu.length > sp.lam:
        raise DomainError(f"{mu} longer than the Kepler rank {sp.lam}")
    a = float(sp.a)
    num = pt.pochhammer(sp.d / sp.r, mu, a) * pt.pochhammer(sp.r * a / 2.0, mu, a)
    den = spec.coeffs.rho(mu) * pt.pochhammer(sp.lam * a / 2.0, mu, a)
    return float(num / den)


def _series(spec: KernelSpec, z, w, shift: int, keep_shift_in_component: bool, tol):
    """Shared series driver.

    ``shift`` is the order k of the index shift kappa = (k,..,k); when
    ``keep_shift_in_component`` the component E^{mu+kappa} is used (full
    and truncated kernels), otherwise E^mu (cross-section kernel).
    """
    sp = spec.space
    lam = sp.lam
    a = float(sp.a)
    mmax = spec.weight_bound - shift * lam
    mus = pt.enumerate_partitions(lam, mmax)
    shifted = [mu.shifted(shift, lam) for mu in mus] if shift else mus
    comp_index = shifted if keep_shift_in_component else mus
    comps = pt.fischer_components(sp, comp_index, z, w)
    terms = np.empty(len(mus), dtype=complex)
    for i, (mu, nu_idx) in enumerate(zip(mus, shifted)):
        coeff = kernel_coefficient(spec, nu_idx)
        if not keep_shift_in_component:
            coeff *= float(
                pt.pochhammer(sp.d2 / lam, mu, a) / pt.pochhammer(sp.d2 / lam, nu_idx, a)
            )
        terms[i] = coeff * comps[i]
    last_shell = max((mu.weight for mu in mus), default=0)
    tail = float(sum(abs(terms[i]) for i, mu in enumerate(mus) if mu.weight == last_shell))
    value = complex(np.sum(terms))
    if tol is not None and tail > tol:
        raise ConvergenceError(
            f"tail estimate {tail:.3e} above requested tolerance {tol:.3e} "
            f"at weight bound {spec.weight_bound}"
        )
    return KernelValue(value, tail)


def kernel_eval(spec: KernelSpec, z, w, tol: float | None = None) -> KernelValue:
    """Full-module kernel sum_{|mu| <= M} coeff(mu) E^mu(z, w).

    Returns the value together with the magnitude of the last weight
    shell as a tail estimate; raises ConvergenceError if a tolerance is
    given and the estimate exceeds it.
    """
    if spec.vanishing_order != 0:
        raise ConfigError("kernel_eval expects a spec with vanishing_order 0")
    return _series(spec, z, w, 0, True, tol)


def truncated_kernel_eval(spec: KernelSpec, z, w, tol: float | None = None) -> KernelValue:
    """Kernel of the submodule vanishing to order >= k on the singular set:
    sum over E^{mu+kappa} with kappa = (k,..,k) of length lam."""
    if spec.vanishing_order < 1:
        raise ConfigError("truncated kernel needs vanishing_order >= 1")
    return _series(spec, z, w, spec.vanishing_order, True, tol)


def q_kernel_eval(spec: KernelSpec, z, w, tol: float | None = None) -> KernelValue:
    """Cross-section kernel Q: the order-1 truncated coefficients carried
    by the unshifted components,

        Q(z,w) = sum_mu coeff(mu+1) (d2/lam)_mu / (d2/lam)_{mu+1} E^mu(z,w).

    Strictly positive on the diagonal.  The series depends on the chart
    tripotent only through d2, i.e. not at all, so no tripotent argument
    is taken.
    """
    if spec.vanishing_order != 1:
        raise ConfigError("the cross-section kernel is defined for vanishing_order 1")
    return _series(spec, z, w, 1, False, tol)


def normalized_kernel(evaluator: Callable, w0, z, w) -> complex:
    """Kernel normalized at w0: K0(z, w) = phi(z) K(z, w) conj(phi(w)) with
    phi(z) = K(w0, w0)^{1/2} / K(z, w0), so that K0(., w0) = 1."""
    k_zw0 = complex(evaluator(z, w0))
    k_ww0 = complex(evaluator(w, w0))
    if k_zw0 == 0 or k_ww0 == 0:
        raise DomainError("kernel vanishes against the normalization point")
    k00 = complex(evaluator(w0, w0))
    root = math.sqrt(k00.real)
    phi_z = root / k_zw0
    phi_w = root / k_ww0
    return phi_z * complex(evaluator(z, w)) * np.conj(phi_w)


def diagonal_point(space: TripleSpace, ts) -> np.ndarray:
    """sum_i t_i e_i on the frame of standard diagonal matrix units."""
    ts = np.asarray(ts, dtype=float)
    if ts.size > space.r:
        raise DomainError("more frame coefficients than the rank allows")
    x = space.zero()
    for i, t in enumerate(ts):
        x[i, i] = t
    return x


class RecoveryResult(NamedTuple):
    table: dict
    condition_number: float
    max_residual: float


def _diagonal_grid(lam: int, n: int) -> np.ndarray:
    """Deterministic sample spectra: n tuples of lam distinct values in (0, 1).

    Base points sweep [0.3, 0.85]; additional coordinates are shrunk by
    a per-sample ratio so that sample spectra differ in shape, not just
    scale (scale-only families make same-weight Schur columns collinear).
    """
    grid = np.empty((n, lam))
    for j in range(n):
        base = 0.3 + 0.55 * (j / max(n - 1, 1))
        ratio = 0.35 + 0.45 * ((j * 0.6180339887498949) % 1.0)
        for i in range(lam):
            grid[j, i] = base * ratio**i
    return grid


def recover_coefficients(
    space: TripleSpace,
    evaluator: Callable,
    weight_bound: int,
    *,
    n_samples: int | None = None,
    cond_limit: float = 1e12,
) -> RecoveryResult:
    """Recover rho_{mu+1} for |mu| <= weight_bound from diagonal values of Q.

    The evaluator is sampled at points x = sum_i t_i e_i on the standard
    frame; the values are solved against the basis E^mu(x, x) by a
    column-scaled least-squares collocation, and the series coefficient
    formula is inverted entrywise.  The collocation matrix condition
    number is reported; an ill-conditioned system or a nonpositive
    recovered coefficient raises DomainError.
    """
    lam = space.lam
    mus = pt.enumerate_partitions(lam, weight_bound)
    nb = len(mus)
    if n_samples is None:
        n_samples = 2 * nb
    if n_samples < nb:
        raise ConfigError(f"need at least {nb} samples, got {n_samples}")
    grid = _diagonal_grid(lam, n_samples)

    design = np.empty((n_samples, nb))
    values = np.empty(n_samples)
    for j in range(n_samples):
        x = diagonal_point(space, grid[j])
        values[j] = float(np.real(complex(evaluator(x))))
        comps = pt.fischer_components(space, mus, x, x)
        design[j] = comps.real
    scale = np.linalg.norm(design, axis=0)
    cond = float(np.linalg.cond(design / scale))
    if cond > cond_limit:
        raise DomainError(f"ill-conditioned collocation matrix (cond = {cond:.3e})")
    sol, *_ = np.linalg.lstsq(design / scale, values, rcond=None)
    coeffs = sol / scale
    residual = float(np.max(np.abs(design @ coeffs - values)))

    a = float(space.a)
    table = {}
    for mu, c_mu in zip(mus, coeffs):
        if c_mu <= 0:
            raise DomainError(f"recovered coefficient for {mu} is not positive: {c_mu}")
        shifted = mu.shifted(1, lam)
        numer = (
            pt.pochhammer(space.d / space.r, shifted, a)
            * pt.pochhammer(space.r * a / 2.0, shifted, a)
            * pt.pochhammer(space.d2 / lam, mu, a)
        )
        denom = (
            pt.pochhammer(space.lam * a / 2.0, shifted, a)
            * pt.pochhammer(space.d2 / lam, shifted, a)
            * c_mu
        )
        table[shifted] = float(numer / denom)
    return RecoveryResult(table=table, condition_number=cond, max_residual=residual)
