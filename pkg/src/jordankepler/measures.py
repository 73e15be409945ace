"""Radial measures on the symmetric cone and their partition moments.

A K-invariant measure on the rank-lam Kepler manifold is determined by
its radial part, a probability measure on the cone interval (0, c) of
the Peirce-2 Jordan algebra of a rank-lam tripotent.  Its moments
against the conical power functions N_mu give the coefficient sequence
of the associated Hilbert module.  This module provides the closed
moment forms, a quadrature/Monte-Carlo check of the underlying beta
integral, and a polar-decomposition check of the monomial norms for the
rank-one ball.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import partitions as pt
from .errors import ConfigError, DomainError
from .partitions import EMPTY, Partition
from .triples import TripleSpace

__all__ = [
    "RadialMeasure",
    "BetaCheck",
    "beta_integral_check",
    "ReproducingCheck",
    "reproducing_property_check",
]


class RadialMeasure:
    """Radial part of a K-invariant probability measure.

    Kinds: ``nu-measure`` (density proportional to N(t)^{d1/lam}
    N(c-t)^{nu-p} on the cone interval), ``hardy-point-mass`` (point mass
    at c, all moments 1), ``custom-density`` (callable density in the
    ordered eigenvalues, normalized internally so the total mass is 1).
    """

    def __init__(self, kind, space, nu=None, density=None, mc_samples=200_000, seed=0):
        if kind not in ("nu-measure", "hardy-point-mass", "custom-density"):
            raise ConfigError(f"unknown measure kind {kind!r}")
        self.kind = kind
        self.space = space
        self.nu = nu
        self.density = density
        self._mc_samples = mc_samples
        self._seed = seed
        self._norm = None
        if kind == "nu-measure":
            if nu is None:
                raise ConfigError("nu-measure needs nu")
            if nu <= space.p - 1:
                raise ConfigError(f"nu-measure integrable only for nu > p - 1 = {space.p - 1}")
        if kind == "custom-density":
            if density is None:
                raise ConfigError("custom-density needs a density callable")
            if space.lam not in (1, 2):
                raise ConfigError("numeric moments supported for lam in {1, 2} only")

    @classmethod
    def nu_measure(cls, space: TripleSpace, nu: float) -> "RadialMeasure":
        return cls("nu-measure", space, nu=float(nu))

    @classmethod
    def hardy(cls, space: TripleSpace) -> "RadialMeasure":
        return cls("hardy-point-mass", space)

    @classmethod
    def custom(cls, space, density, mc_samples=200_000, seed=0) -> "RadialMeasure":
        return cls("custom-density", space, density=density, mc_samples=mc_samples, seed=seed)

    def moment(self, mu: Partition) -> float:
        """rho_mu = integral of N_mu against the radial measure; rho_0 = 1."""
        lam = self.space.lam
        if mu.length > lam:
            raise DomainError(f"{mu} longer than the Kepler rank {lam}")
        if self.kind == "hardy-point-mass":
            return 1.0
        if self.kind == "nu-measure":
            den = pt.pochhammer(self.nu, mu, self.space.a)
            if den == 0:
                raise DomainError(f"nu = {self.nu} is a pole of (nu)_mu for {mu}")
            return float(pt.pochhammer(self.space.d_lam / lam, mu, self.space.a) / den)
        raw = self._raw_custom_moment(mu)
        if self._norm is None:
            self._norm = self._raw_custom_moment(EMPTY)
            if self._norm <= 0:
                raise DomainError("custom density has nonpositive mass")
        return raw / self._norm if mu.parts else 1.0

    def _raw_custom_moment(self, mu: Partition) -> float:
        lam = self.space.lam
        if lam == 1:
            m = mu.parts[0] if mu.parts else 0
            val, _ = integrate.quad(
                lambda t: self.density(t) * t**m, 0.0, 1.0, epsabs=1e-13, epsrel=1e-12
            )
            return val
        parts = mu.padded(2)
        rng = np.random.default_rng(self._seed)

        def f(x, y, u, v):
            det1 = x * y - (u * u + v * v)
            eig = _ordered_eigs_2x2(x, y, u, v)
            return self.density(eig) * x ** (parts[0] - parts[1]) * det1 ** parts[1]

        total, _ = _mc_hermitian_interval(f, rng, self._mc_samples)
        return total


def _ordered_eigs_2x2(x, y, u, v):
    half = 0.5 * (x + y)
    disc = np.sqrt(0.25 * (x - y) ** 2 + u * u + v * v)
    return np.stack([half + disc, half - disc], axis=-1)


def _mc_hermitian_interval(f, rng, n_samples, block=500_000):
    """Mean of f over the box [0,1]^2 x [-1/2,1/2]^2 restricted to the
    hermitian matrix interval 0 < t < 1 (f evaluated only on accepted
    samples, zero elsewhere).  The box has unit volume, so the mean is
    the integral.  Returns (integral, standard error)."""
    remaining = n_samples
    total = 0.0
    total_sq = 0.0
    while remaining > 0:
        n = min(block, remaining)
        remaining -= n
        x = rng.random(n)
        y = rng.random(n)
        u = rng.random(n) - 0.5
        v = rng.random(n) - 0.5
        rad = u * u + v * v
        ok = (x * y > rad) & ((1.0 - x) * (1.0 - y) > rad)
        vals = np.zeros(n)
        if np.any(ok):
            vals[ok] = f(x[ok], y[ok], u[ok], v[ok])
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
    mean = total / n_samples
    var = max(total_sq / n_samples - mean * mean, 0.0)
    return mean, math.sqrt(var / n_samples)


class BetaCheck(NamedTuple):
    lhs: float
    rhs: float
    abs_error: float
    rel_error: float
    std_error: float | None


def beta_integral_check(
    space: TripleSpace,
    nu: float,
    mu: Partition,
    method: str = "quadrature",
    seed: int = 0,
    n_samples: int = 10_000_000,
) -> BetaCheck:
    """Numerically verify the cone beta integral

        int_{0 < t < c} N(t)^{d1/lam} N(c-t)^{nu-p} N_mu(t) dt
            = Gamma_lam(d_lam/lam) Gamma_lam(nu - d_lam/lam) / Gamma_lam(nu)
              * (d_lam/lam)_mu / (nu)_mu

    by 1-D quadrature for lam = 1 and seeded Monte Carlo over the 2x2
    hermitian interval for lam = 2.
    """
    lam = space.lam
    if mu.length > lam:
        raise DomainError(f"{mu} longer than the Kepler rank {lam}")
    if nu <= space.p - 1:
        raise DomainError(f"integrand not integrable: need nu > p - 1 = {space.p - 1}")
    a = float(space.a)
    base = space.d_lam / lam
    log_const = (
        pt.log_gamma_lambda(base, lam, a)
        + pt.log_gamma_lambda(nu - base, lam, a)
        - pt.log_gamma_lambda(nu, lam, a)
    )
    rhs = math.exp(log_const) * float(pt.pochhammer(base, mu, a) / pt.pochhammer(nu, mu, a))

    d1_over = space.d1 / lam
    expo = nu - space.p
    std = None
    if method == "quadrature":
        if lam != 1:
            raise ConfigError("quadrature path implemented for lam = 1; use monte-carlo")
        m = mu.parts[0] if mu.parts else 0
        lhs, _ = integrate.quad(
            lambda t: t ** (d1_over + m) * (1.0 - t) ** expo,
            0.0,
            1.0,
            epsabs=1e-15,
            epsrel=1e-13,
            limit=200,
        )
    elif method == "monte-carlo":
        if lam != 2:
            raise ConfigError("monte-carlo path implemented for lam = 2")
        parts = mu.padded(2)
        rng = np.random.default_rng(np.random.SeedSequence(seed))

        def f(x, y, u, v):
            det1 = x * y - (u * u + v * v)
            det2 = (1.0 - x) * (1.0 - y) - (u * u + v * v)
            return det1**d1_over * det2**expo * x ** (parts[0] - parts[1]) * det1 ** parts[1]

        lhs, std = _mc_hermitian_interval(f, rng, n_samples)
    else:
        raise ConfigError(f"unknown method {method!r}")
    abs_err = abs(lhs - rhs)
    return BetaCheck(lhs=lhs, rhs=rhs, abs_error=abs_err, rel_error=abs_err / abs(rhs), std_error=std)


class ReproducingCheck(NamedTuple):
    rho_numeric: float
    rho_exact: float
    rel_error: float
    sphere_moment_mc: float
    sphere_moment_exact: float


def reproducing_property_check(
    d: int, nu: float, m: int, seed: int = 0, n_samples: int = 1_000_000
) -> ReproducingCheck:
    """Monomial-norm check for the weighted measure on the rank-one ball C^d.

    The squared norm of z_1^m under the probability measure with density
    proportional to (1 - |z|^2)^{nu - d - 1} splits by polar integration
    into a radial beta factor times the sphere average of |u_1|^{2m}; the
    ratio against the exact sphere moment must equal the moment
    rho_m = (d)_m / (nu)_m.  The sphere average is taken over the K-orbit
    of the basis tripotent, sampled from the seeded unitary-invariant
    distribution.  Works for the rank-one case lam = r = 1 only.
    """
    if d < 1:
        raise ConfigError("need d >= 1")
    if nu <= d:
        raise DomainError(f"need nu > d for integrability, got nu = {nu}")
    radial, _ = integrate.quad(
        lambda t: t ** (m + d - 1) * (1.0 - t) ** (nu - d - 1),
        0.0,
        1.0,
        epsabs=1e-15,
        epsrel=1e-13,
    )
    log_const = math.lgamma(nu) - math.lgamma(nu - d) - math.lgamma(d)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if d == 1:
        sphere_mc = 1.0
    else:
        total = 0.0
        remaining = n_samples
        while remaining > 0:
            n = min(500_000, remaining)
            remaining -= n
            g = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
            norms = np.linalg.norm(g, axis=1)
            total += float(np.sum((np.abs(g[:, 0]) / norms) ** (2 * m)))
        sphere_mc = total / n_samples
    sphere_exact = math.factorial(m) / float(pt.rising_factorial(float(d), m))
    rho_numeric = math.exp(log_const) * radial * sphere_mc / sphere_exact
    rho_exact = float(
        pt.rising_factorial(float(d), m) / pt.rising_factorial(float(nu), m)
    )
    return ReproducingCheck(
        rho_numeric=rho_numeric,
        rho_exact=rho_exact,
        rel_error=abs(rho_numeric - rho_exact) / rho_exact,
        sphere_moment_mc=sphere_mc,
        sphere_moment_exact=sphere_exact,
    )
